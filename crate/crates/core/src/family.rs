//! Families of lattice objects over finite topological spaces.
//!
//! A finite space is a preorder: `(s', s)` means `s` lies in the closure of
//! `{s'}` (`s` specializes `s'`). Open sets are the generization-closed
//! subsets and closed sets the specialization-closed ones. All base spaces
//! here are reduced, so a stratum is just a set of points.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::hntype::{hnt_leq, HnType, HnTypeError};
use crate::lattice::{
    forced_first_step, hn_filtration, hn_type, interval_quotient, is_semistable, validate_lattice,
    HnFiltration, LatticeError, LatticeInput, SubobjectLattice,
};
use crate::numpoly::Degree;

pub type PointId = usize;
pub type PointSet = BTreeSet<PointId>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("duplicate point id {0:?}")]
    DuplicatePoint(String),
    #[error("unknown point id {0:?}")]
    UnknownPoint(String),
    #[error("no fiber given for point {0:?}")]
    MissingFiber(String),
    #[error("fiber at {point:?}: {source}")]
    Fiber { point: String, source: LatticeError },
    #[error("fiber at {0:?} is the zero object")]
    ZeroFiber(String),
    #[error("fiber at {point:?} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        point: String,
        expected: Degree,
        found: Degree,
    },
    #[error("total Hilbert polynomial differs between connected points {0:?} and {1:?}")]
    FlatnessViolation(String, String),
    #[error("stratification requires semicontinuity: {0}")]
    SemicontinuityRequired(SemicontinuityViolation),
    #[error("stratification assertion failed: {0}")]
    StratificationAssertion(String),
    #[error("recursive stratum for {tau} is {recursive:?} but the level set is {direct:?}")]
    InductionMismatch {
        tau: HnType,
        recursive: Vec<String>,
        direct: Vec<String>,
    },
    #[error(transparent)]
    Type(#[from] HnTypeError),
}

impl FamilyError {
    pub fn code(&self) -> &'static str {
        match self {
            FamilyError::DuplicatePoint(_) => "DuplicatePoint",
            FamilyError::UnknownPoint(_) => "UnknownPoint",
            FamilyError::MissingFiber(_) => "MissingFiber",
            FamilyError::Fiber { source, .. } => source.code(),
            FamilyError::ZeroFiber(_) => "ZeroFiber",
            FamilyError::DimensionMismatch { .. } => "DimensionMismatch",
            FamilyError::FlatnessViolation(..) => "FlatnessViolation",
            FamilyError::SemicontinuityRequired(_) => "SemicontinuityRequired",
            FamilyError::StratificationAssertion(_) => "StratificationAssertion",
            FamilyError::InductionMismatch { .. } => "InductionMismatch",
            FamilyError::Type(e) => e.code(),
        }
    }
}

/// A finite topological space given by its specialization preorder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    names: Vec<String>,
    // spec[a][b]: b lies in the closure of {a}
    spec: Vec<Vec<bool>>,
}

impl FiniteSpace {
    /// Reflexive-transitive closure of the given `(generic, special)` pairs.
    pub fn new(names: Vec<String>, pairs: &[(PointId, PointId)]) -> Self {
        let n = names.len();
        let mut spec = vec![vec![false; n]; n];
        for (i, row) in spec.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            spec[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if spec[i][k] {
                    let row = spec[k].clone();
                    for (cell, &reach) in spec[i].iter_mut().zip(&row) {
                        if reach {
                            *cell = true;
                        }
                    }
                }
            }
        }
        FiniteSpace { names, spec }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = PointId> {
        0..self.len()
    }

    pub fn all(&self) -> PointSet {
        self.points().collect()
    }

    pub fn name(&self, p: PointId) -> &str {
        &self.names[p]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn point_by_name(&self, name: &str) -> Option<PointId> {
        self.names.iter().position(|n| n == name)
    }

    /// Whether `special` lies in the closure of `{generic}`.
    pub fn specializes(&self, generic: PointId, special: PointId) -> bool {
        self.spec[generic][special]
    }

    /// All pairs `(s', s)` with `s` in the closure of `{s'}`, `s' != s`.
    pub fn specialization_pairs(&self) -> impl Iterator<Item = (PointId, PointId)> + '_ {
        self.points()
            .flat_map(move |a| self.points().map(move |b| (a, b)))
            .filter(move |&(a, b)| a != b && self.spec[a][b])
    }

    /// Generization-closed.
    pub fn is_open(&self, set: &PointSet) -> bool {
        set.iter()
            .all(|&s| self.points().all(|g| !self.spec[g][s] || set.contains(&g)))
    }

    /// Specialization-closed.
    pub fn is_closed(&self, set: &PointSet) -> bool {
        self.is_closed_in(set, &self.all())
    }

    /// Closed in the subspace topology of `ambient` (`set` is assumed inside it).
    pub fn is_closed_in(&self, set: &PointSet, ambient: &PointSet) -> bool {
        set.iter().all(|&g| {
            ambient
                .iter()
                .all(|&s| !self.spec[g][s] || set.contains(&s))
        })
    }

    /// Subspace with the induced preorder; point `i` of the result is the
    /// `i`-th smallest element of `subset`.
    pub fn subspace(&self, subset: &PointSet) -> FiniteSpace {
        let ids: Vec<PointId> = subset.iter().copied().collect();
        FiniteSpace {
            names: ids.iter().map(|&p| self.names[p].clone()).collect(),
            spec: ids
                .iter()
                .map(|&a| ids.iter().map(|&b| self.spec[a][b]).collect())
                .collect(),
        }
    }

    /// Connected component label of each point.
    pub fn components(&self) -> Vec<usize> {
        let n = self.len();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            label[start] = next;
            while let Some(p) = stack.pop() {
                for (q, l) in label.iter_mut().enumerate() {
                    if *l == usize::MAX && (self.spec[p][q] || self.spec[q][p]) {
                        *l = next;
                        stack.push(q);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn names_of(&self, set: &PointSet) -> Vec<String> {
        set.iter().map(|&p| self.names[p].clone()).collect()
    }
}

/// A family of pure objects over a finite space with locally constant total
/// Hilbert polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheafFamily {
    space: FiniteSpace,
    fibers: Vec<SubobjectLattice>,
}

impl SheafFamily {
    /// Validates every fiber, a common dimension, and constancy of `P(E_s)`
    /// on connected components.
    pub fn new(space: FiniteSpace, fibers: Vec<SubobjectLattice>) -> Result<Self, FamilyError> {
        assert_eq!(space.len(), fibers.len(), "one fiber per point");
        let mut dim = None;
        for (p, fiber) in fibers.iter().enumerate() {
            let point = space.name(p).to_string();
            validate_lattice(fiber).map_err(|source| FamilyError::Fiber {
                point: point.clone(),
                source,
            })?;
            if fiber.is_zero_object() {
                return Err(FamilyError::ZeroFiber(point));
            }
            let found = fiber.total().degree();
            match dim {
                None => dim = Some(found),
                Some(expected) if expected != found => {
                    return Err(FamilyError::DimensionMismatch {
                        point,
                        expected,
                        found,
                    })
                }
                _ => {}
            }
        }
        Self::check_flat(&space, &fibers)?;
        Ok(SheafFamily { space, fibers })
    }

    fn check_flat(space: &FiniteSpace, fibers: &[SubobjectLattice]) -> Result<(), FamilyError> {
        let comp = space.components();
        let mut seen: HashMap<usize, PointId> = HashMap::new();
        for p in space.points() {
            let first = *seen.entry(comp[p]).or_insert(p);
            if fibers[first].total() != fibers[p].total() {
                return Err(FamilyError::FlatnessViolation(
                    space.name(first).to_string(),
                    space.name(p).to_string(),
                ));
            }
        }
        Ok(())
    }

    // for quotient families, whose fibers are intervals of valid lattices
    fn new_unchecked(space: FiniteSpace, fibers: Vec<SubobjectLattice>) -> Self {
        debug_assert!(Self::check_flat(&space, &fibers).is_ok());
        SheafFamily { space, fibers }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn fiber(&self, p: PointId) -> &SubobjectLattice {
        &self.fibers[p]
    }

    pub fn fibers(&self) -> &[SubobjectLattice] {
        &self.fibers
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }
}

fn fiber_err(space: &FiniteSpace, p: PointId) -> impl FnOnce(LatticeError) -> FamilyError + '_ {
    move |source| FamilyError::Fiber {
        point: space.name(p).to_string(),
        source,
    }
}

/// `s -> HN(E_s)`.
pub fn hn_function(family: &SheafFamily) -> Result<Vec<HnType>, FamilyError> {
    family
        .space
        .points()
        .map(|p| hn_type(family.fiber(p)).map_err(fiber_err(&family.space, p)))
        .collect()
}

/// A specialization `generic ~> special` along which the type drops or
/// becomes incomparable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemicontinuityViolation {
    pub generic: String,
    pub special: String,
    pub generic_type: HnType,
    pub special_type: HnType,
}

impl fmt::Display for SemicontinuityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ~> {}: HN {} is not <= HN {}",
            self.generic, self.special, self.generic_type, self.special_type
        )
    }
}

impl SemicontinuityViolation {
    pub fn to_json(&self) -> Value {
        json!({
            "generic": self.generic,
            "special": self.special,
            "generic_type": self.generic_type,
            "special_type": self.special_type,
        })
    }
}

/// Checks `HN(E_s') <= HN(E_s)` for every specialization `s' ~> s`.
pub fn check_semicontinuity(
    family: &SheafFamily,
) -> Result<Result<(), SemicontinuityViolation>, FamilyError> {
    let types = hn_function(family)?;
    Ok(first_violation(&family.space, &types).map_or(Ok(()), Err))
}

fn first_violation(space: &FiniteSpace, types: &[HnType]) -> Option<SemicontinuityViolation> {
    space
        .specialization_pairs()
        .find(|&(g, s)| !hnt_leq(&types[g], &types[s]))
        .map(|(g, s)| SemicontinuityViolation {
            generic: space.name(g).to_string(),
            special: space.name(s).to_string(),
            generic_type: types[g].clone(),
            special_type: types[s].clone(),
        })
}

/// One level set of the HN function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub ty: HnType,
    pub points: PointSet,
    /// `S^{<= ty}`: points whose type is `<= ty`.
    pub below: PointSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratification {
    pub strata: Vec<Stratum>,
}

impl Stratification {
    pub fn stratum(&self, ty: &HnType) -> Option<&Stratum> {
        self.strata.iter().find(|s| &s.ty == ty)
    }

    pub fn types(&self) -> impl Iterator<Item = &HnType> {
        self.strata.iter().map(|s| &s.ty)
    }
}

/// Points whose HN type is exactly `tau`.
pub fn level_set(family: &SheafFamily, tau: &HnType) -> Result<PointSet, FamilyError> {
    let types = hn_function(family)?;
    Ok(family
        .space
        .points()
        .filter(|&p| &types[p] == tau)
        .collect())
}

/// Level sets of the HN function, with the open/closed assertions checked.
/// Refuses families that are not semicontinuous.
pub fn stratify(family: &SheafFamily) -> Result<Stratification, FamilyError> {
    let space = &family.space;
    let types = hn_function(family)?;
    if let Some(v) = first_violation(space, &types) {
        return Err(FamilyError::SemicontinuityRequired(v));
    }
    let mut by_type: BTreeMap<HnType, PointSet> = BTreeMap::new();
    for p in space.points() {
        by_type.entry(types[p].clone()).or_default().insert(p);
    }
    let strata: Vec<Stratum> = by_type
        .into_iter()
        .map(|(ty, points)| {
            let below = space
                .points()
                .filter(|&p| hnt_leq(&types[p], &ty))
                .collect();
            Stratum { ty, points, below }
        })
        .collect();
    let fail = |msg: String| Err(FamilyError::StratificationAssertion(msg));
    let covered: usize = strata.iter().map(|s| s.points.len()).sum();
    if covered != space.len() {
        return fail("strata do not partition the space".into());
    }
    for s in &strata {
        if !space.is_open(&s.below) {
            return fail(format!("S^<={} is not open", s.ty));
        }
        if !s.points.is_subset(&s.below) {
            return fail(format!("S^{} is not inside S^<={}", s.ty, s.ty));
        }
        if !space.is_closed_in(&s.points, &s.below) {
            return fail(format!("S^{} is not closed in S^<={}", s.ty, s.ty));
        }
        for t in &strata {
            if hnt_leq(&t.ty, &s.ty) != t.points.is_subset(&s.below) {
                return fail(format!("S^<={} is not the union of strata below it", s.ty));
            }
        }
    }
    Ok(Stratification { strata })
}

/// The stratum of `tau`, built by induction on the length of `tau`:
///
/// * length 1: points whose fiber is semistable with `P = f_1`;
/// * otherwise: restrict to `U = {HN(E_s) <= tau}`, keep the points `Q` of
///   `U` with a subobject of Hilbert polynomial `f_1` (necessarily the
///   maximal destabilizer), pass to the quotient family over `Q` and recurse
///   with `(f_2 - f_1, ..., f_p - f_1)`.
///
/// The result is compared with the direct level set on every call.
pub fn recursive_stratify(family: &SheafFamily, tau: &HnType) -> Result<PointSet, FamilyError> {
    let space = &family.space;
    let result = if tau.len() == 1 {
        let mut out = PointSet::new();
        for p in space.points() {
            let fiber = family.fiber(p);
            if fiber.total() == tau.first() && is_semistable(fiber).map_err(fiber_err(space, p))? {
                out.insert(p);
            }
        }
        out
    } else {
        let types = hn_function(family)?;
        let mut quotient_points = PointSet::new();
        let mut quotient_fibers = Vec::new();
        // Only fibers with P = f_l can carry type tau; the order alone does
        // not pin the endpoint.
        for p in space.points().filter(|&p| hnt_leq(&types[p], tau)) {
            let fiber = family.fiber(p);
            if fiber.total() != tau.last() {
                continue;
            }
            if let Some(step) = forced_first_step(fiber, tau).map_err(fiber_err(space, p))? {
                quotient_points.insert(p);
                quotient_fibers.push(interval_quotient(fiber, step).map_err(fiber_err(space, p))?);
            }
        }
        let ids: Vec<PointId> = quotient_points.iter().copied().collect();
        let quotient =
            SheafFamily::new_unchecked(space.subspace(&quotient_points), quotient_fibers);
        recursive_stratify(&quotient, &tau.quotient_shift()?)?
            .into_iter()
            .map(|q| ids[q])
            .collect()
    };
    let direct = level_set(family, tau)?;
    if result != direct {
        return Err(FamilyError::InductionMismatch {
            tau: tau.clone(),
            recursive: space.names_of(&result),
            direct: space.names_of(&direct),
        });
    }
    Ok(result)
}

/// Per-point HN filtrations of type `tau`, present exactly when every point
/// lies in the stratum of `tau`.
pub fn relative_hn(
    family: &SheafFamily,
    tau: &HnType,
) -> Result<Option<Vec<HnFiltration>>, FamilyError> {
    if recursive_stratify(family, tau)?.len() != family.len() {
        return Ok(None);
    }
    family
        .space
        .points()
        .map(|p| hn_filtration(family.fiber(p)).map_err(fiber_err(&family.space, p)))
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

/// Restriction to a subspace. Point `i` of the result is the `i`-th smallest
/// element of `subset`.
pub fn restrict(family: &SheafFamily, subset: &PointSet) -> SheafFamily {
    let fibers = subset.iter().map(|&p| family.fibers[p].clone()).collect();
    SheafFamily::new_unchecked(family.space.subspace(subset), fibers)
}

/// Both sides of the base-change identity for one type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseChange {
    /// Stratum of the restricted family, as points of the ambient family.
    pub restricted: PointSet,
    /// `T` intersected with the ambient stratum.
    pub intersected: PointSet,
}

impl BaseChange {
    pub fn holds(&self) -> bool {
        self.restricted == self.intersected
    }
}

pub fn base_change_check(
    family: &SheafFamily,
    subset: &PointSet,
    tau: &HnType,
) -> Result<BaseChange, FamilyError> {
    let ids: Vec<PointId> = subset.iter().copied().collect();
    let restricted = recursive_stratify(&restrict(family, subset), tau)?
        .into_iter()
        .map(|q| ids[q])
        .collect();
    let intersected = recursive_stratify(family, tau)?
        .intersection(subset)
        .copied()
        .collect();
    Ok(BaseChange {
        restricted,
        intersected,
    })
}

/// JSON family: `{"points": [...], "specializes": [[s_prime, s], ...], "fibers": {id: lattice-or-splitting}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub points: Vec<String>,
    #[serde(default)]
    pub specializes: Vec<(String, String)>,
    pub fibers: BTreeMap<String, LatticeInput>,
}

impl FamilySpec {
    pub fn build(&self) -> Result<SheafFamily, FamilyError> {
        let mut index = HashMap::new();
        for (i, p) in self.points.iter().enumerate() {
            if index.insert(p.as_str(), i).is_some() {
                return Err(FamilyError::DuplicatePoint(p.clone()));
            }
        }
        let lookup = |p: &String| {
            index
                .get(p.as_str())
                .copied()
                .ok_or_else(|| FamilyError::UnknownPoint(p.clone()))
        };
        let pairs = self
            .specializes
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>, FamilyError>>()?;
        for key in self.fibers.keys() {
            lookup(key)?;
        }
        let fibers = self
            .points
            .iter()
            .map(|p| {
                let input = self
                    .fibers
                    .get(p)
                    .ok_or_else(|| FamilyError::MissingFiber(p.clone()))?;
                input.build().map_err(|source| FamilyError::Fiber {
                    point: p.clone(),
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        SheafFamily::new(FiniteSpace::new(self.points.clone(), &pairs), fibers)
    }

    /// Serializes a family, writing every fiber as a lattice.
    pub fn from_family(family: &SheafFamily) -> Self {
        let space = family.space();
        let mut specializes = Vec::new();
        for (a, b) in space.specialization_pairs() {
            specializes.push((space.name(a).to_string(), space.name(b).to_string()));
        }
        FamilySpec {
            points: space.names().to_vec(),
            specializes,
            fibers: space
                .points()
                .map(|p| {
                    (
                        space.name(p).to_string(),
                        LatticeInput::Lattice(family.fiber(p).to_spec()),
                    )
                })
                .collect(),
        }
    }
}

/// Results of the assertions run by [`stratification_report`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratificationChecks {
    pub semicontinuity: bool,
    pub partition: bool,
    pub open_below: bool,
    pub closed_within: bool,
    pub recursive_matches_direct: bool,
}

impl StratificationChecks {
    pub fn all_pass(&self) -> bool {
        self.semicontinuity
            && self.partition
            && self.open_below
            && self.closed_within
            && self.recursive_matches_direct
    }
}

/// Stratifies and re-derives each stratum recursively, producing
/// `{"strata": [{"type", "points", "below"}], "checks": {...}}`.
pub fn stratification_report(family: &SheafFamily) -> Result<Value, FamilyError> {
    let space = family.space();
    let strat = stratify(family)?;
    let mut recursive_ok = true;
    for s in &strat.strata {
        match recursive_stratify(family, &s.ty) {
            Ok(set) => recursive_ok &= set == s.points,
            Err(FamilyError::InductionMismatch { .. }) => recursive_ok = false,
            Err(e) => return Err(e),
        }
    }
    let covered: usize = strat.strata.iter().map(|s| s.points.len()).sum();
    let checks = StratificationChecks {
        semicontinuity: true,
        partition: covered == space.len(),
        open_below: strat.strata.iter().all(|s| space.is_open(&s.below)),
        closed_within: strat
            .strata
            .iter()
            .all(|s| space.is_closed_in(&s.points, &s.below)),
        recursive_matches_direct: recursive_ok,
    };
    let strata: Vec<Value> = strat
        .strata
        .iter()
        .map(|s| {
            json!({
                "type": s.ty,
                "points": space.names_of(&s.points),
                "below": space.names_of(&s.below),
            })
        })
        .collect();
    Ok(json!({ "strata": strata, "checks": checks }))
}
