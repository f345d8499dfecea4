//! Finite subobject lattices labelled by Hilbert polynomials.
//!
//! A [`SubobjectLattice`] stands in for a pure coherent sheaf `E`: its nodes
//! are subobjects, ordered by inclusion, with bottom `0` and top `E`. A valid
//! lattice satisfies
//!
//! * `P(0) = 0` and `F < G => P(F) < P(G)`,
//! * `P(F v G) + P(F ^ G) = P(F) + P(G)`,
//! * every nonzero node has a label of the same degree `d`.
//!
//! Semistability, the maximal destabilizer, and the Harder-Narasimhan
//! filtration are computed exhaustively over the nodes. Split bundles on the
//! projective line ([`SplittingType`]) give the Boolean lattice of sub-sums
//! and a closed-form filtration to check against.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hntype::{hnt_leq, validate_hn_type, HnType, HnTypeError};
use crate::numpoly::{Degree, NumPoly, RatPoly};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice has no nodes")]
    NoNodes,
    #[error("duplicate node id {0:?}")]
    DuplicateNode(String),
    #[error("unknown node id {0:?}")]
    UnknownNode(String),
    #[error("missing Hilbert polynomial for node {0:?}")]
    MissingLabel(String),
    #[error("order is not antisymmetric: {0:?} and {1:?} are mutually below each other")]
    NotAntisymmetric(String, String),
    #[error("relation given as full is not transitive: {0:?} <= {1:?} <= {2:?}")]
    NotTransitive(String, String, String),
    #[error("no bottom element")]
    NoBottom,
    #[error("no top element")]
    NoTop,
    #[error("nodes {0:?} and {1:?} have no meet")]
    NoMeet(String, String),
    #[error("nodes {0:?} and {1:?} have no join")]
    NoJoin(String, String),
    #[error("P(0) = {0} is not zero")]
    BottomLabelNonzero(RatPoly),
    #[error("strict monotonicity fails: {lower:?} < {upper:?} but P({lower}) >= P({upper})")]
    StrictMonotonicityViolation { lower: String, upper: String },
    #[error("modular additivity fails for {0:?} and {1:?}")]
    ModularityViolation(String, String),
    #[error("purity fails: node {node:?} has degree {found}, expected {expected}")]
    PurityViolation {
        node: String,
        expected: Degree,
        found: Degree,
    },
    #[error("the object is zero")]
    EmptyObject,
    #[error("maximal destabilizer is not unique: {0:?}")]
    NonUniqueMaximizer(Vec<String>),
    #[error("hypothesis HN(E) <= tau fails: HN(E) = {found}, tau = {bound}")]
    HypothesisViolation { found: HnType, bound: HnType },
    #[error("postcondition failed: {0}")]
    PostconditionFailed(String),
    #[error("splitting type must be nonempty")]
    EmptySplitting,
    #[error(transparent)]
    Type(#[from] HnTypeError),
}

impl LatticeError {
    pub fn code(&self) -> &'static str {
        match self {
            LatticeError::NoNodes => "NoNodes",
            LatticeError::DuplicateNode(_) => "DuplicateNode",
            LatticeError::UnknownNode(_) => "UnknownNode",
            LatticeError::MissingLabel(_) => "MissingLabel",
            LatticeError::NotAntisymmetric(..) => "NotAntisymmetric",
            LatticeError::NotTransitive(..) => "NotTransitive",
            LatticeError::NoBottom => "NoBottom",
            LatticeError::NoTop => "NoTop",
            LatticeError::NoMeet(..) => "NoMeet",
            LatticeError::NoJoin(..) => "NoJoin",
            LatticeError::BottomLabelNonzero(_) => "BottomLabelNonzero",
            LatticeError::StrictMonotonicityViolation { .. } => "StrictMonotonicityViolation",
            LatticeError::ModularityViolation(..) => "ModularityViolation",
            LatticeError::PurityViolation { .. } => "PurityViolation",
            LatticeError::EmptyObject => "EmptyObject",
            LatticeError::NonUniqueMaximizer(_) => "NonUniqueMaximizer",
            LatticeError::HypothesisViolation { .. } => "HypothesisViolation",
            LatticeError::PostconditionFailed(_) => "PostconditionFailed",
            LatticeError::EmptySplitting => "EmptySplitting",
            LatticeError::Type(e) => e.code(),
        }
    }
}

/// A finite bounded lattice of subobjects with Hilbert polynomial labels.
///
/// The order is stored as its full reflexive-transitive relation, with meet
/// and join tables precomputed.
#[derive(Clone, PartialEq, Eq)]
pub struct SubobjectLattice {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<NodeId>>,
    join: Vec<Vec<NodeId>>,
    polys: Vec<NumPoly>,
    bottom: NodeId,
    top: NodeId,
}

impl fmt::Debug for SubobjectLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubobjectLattice")
            .field("nodes", &self.names.len())
            .field("top", &self.names[self.top])
            .field("P(E)", &self.polys[self.top])
            .finish()
    }
}

impl SubobjectLattice {
    /// Builds the lattice from node names, an order relation (pairs `(a, b)`
    /// meaning `a <= b`; its reflexive-transitive closure is taken), and labels.
    /// Fails unless the closure is a bounded lattice. Labels are not checked
    /// here; see [`validate_lattice`].
    pub fn from_relation(
        names: Vec<String>,
        relation: &[(NodeId, NodeId)],
        polys: Vec<NumPoly>,
    ) -> Result<Self, LatticeError> {
        let n = names.len();
        if n == 0 {
            return Err(LatticeError::NoNodes);
        }
        assert_eq!(polys.len(), n, "one label per node");
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in relation {
            leq[a][b] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    let row = leq[k].clone();
                    for (cell, &reach) in leq[i].iter_mut().zip(&row) {
                        if reach {
                            *cell = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(LatticeError::NotAntisymmetric(
                        names[i].clone(),
                        names[j].clone(),
                    ));
                }
            }
        }
        let bottom = (0..n)
            .find(|&b| (0..n).all(|x| leq[b][x]))
            .ok_or(LatticeError::NoBottom)?;
        let top = (0..n)
            .find(|&t| (0..n).all(|x| leq[x][t]))
            .ok_or(LatticeError::NoTop)?;
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in a..n {
                let lower: Vec<NodeId> = (0..n).filter(|&x| leq[x][a] && leq[x][b]).collect();
                let m = lower
                    .iter()
                    .copied()
                    .find(|&x| lower.iter().all(|&y| leq[y][x]))
                    .ok_or_else(|| LatticeError::NoMeet(names[a].clone(), names[b].clone()))?;
                let upper: Vec<NodeId> = (0..n).filter(|&x| leq[a][x] && leq[b][x]).collect();
                let j = upper
                    .iter()
                    .copied()
                    .find(|&x| upper.iter().all(|&y| leq[x][y]))
                    .ok_or_else(|| LatticeError::NoJoin(names[a].clone(), names[b].clone()))?;
                meet[a][b] = m;
                meet[b][a] = m;
                join[a][b] = j;
                join[b][a] = j;
            }
        }
        Ok(SubobjectLattice {
            names,
            leq,
            meet,
            join,
            polys,
            bottom,
            top,
        })
    }

    /// A chain `0 < c_1 < ... < c_k` with the given labels (the bottom label `0`
    /// is implicit).
    pub fn chain(names: Vec<String>, labels: Vec<NumPoly>) -> Self {
        assert_eq!(names.len(), labels.len());
        let mut all_names = vec!["0".to_string()];
        all_names.extend(names);
        let mut polys = vec![NumPoly::zero()];
        polys.extend(labels);
        let n = polys.len();
        let leq = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
        let meet = (0..n).map(|i| (0..n).map(|j| i.min(j)).collect()).collect();
        let join = (0..n).map(|i| (0..n).map(|j| i.max(j)).collect()).collect();
        SubobjectLattice {
            names: all_names,
            leq,
            meet,
            join,
            polys,
            bottom: 0,
            top: n - 1,
        }
    }

    /// The lattice `M_k`: bottom, `k` pairwise incomparable atoms labelled
    /// `atom`, and a top labelled `2 atom`. Models `k` chosen lines in a
    /// direct sum `A + A`.
    pub fn diamond(atom_names: Vec<String>, top_name: String, atom: NumPoly) -> Self {
        let k = atom_names.len();
        assert!(k >= 2, "a diamond needs at least two atoms");
        let n = k + 2;
        let mut names = vec!["0".to_string()];
        names.extend(atom_names);
        names.push(top_name);
        let mut relation = Vec::new();
        for i in 1..=k {
            relation.push((0, i));
            relation.push((i, n - 1));
        }
        let mut polys = vec![NumPoly::zero()];
        polys.extend(std::iter::repeat_n(atom.clone(), k));
        polys.push(&atom + &atom);
        Self::from_relation(names, &relation, polys).expect("M_k is a lattice")
    }

    /// Direct product with componentwise order and additive labels. Node names
    /// join the nonzero components with `+`.
    pub fn product(&self, other: &SubobjectLattice) -> SubobjectLattice {
        let (n, m) = (self.len(), other.len());
        let idx = |i: NodeId, j: NodeId| i * m + j;
        let mut names = Vec::with_capacity(n * m);
        let mut polys = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                let parts: Vec<&str> = [(i, self), (j, other)]
                    .iter()
                    .filter(|(x, l)| *x != l.bottom)
                    .map(|(x, l)| l.names[*x].as_str())
                    .collect();
                names.push(if parts.is_empty() {
                    "0".to_string()
                } else {
                    parts.join("+")
                });
                polys.push(&self.polys[i] + &other.polys[j]);
            }
        }
        let total = n * m;
        let mut leq = vec![vec![false; total]; total];
        let mut meet = vec![vec![0; total]; total];
        let mut join = vec![vec![0; total]; total];
        for i1 in 0..n {
            for j1 in 0..m {
                for i2 in 0..n {
                    for j2 in 0..m {
                        let (a, b) = (idx(i1, j1), idx(i2, j2));
                        leq[a][b] = self.leq[i1][i2] && other.leq[j1][j2];
                        meet[a][b] = idx(self.meet[i1][i2], other.meet[j1][j2]);
                        join[a][b] = idx(self.join[i1][i2], other.join[j1][j2]);
                    }
                }
            }
        }
        SubobjectLattice {
            names,
            leq,
            meet,
            join,
            polys,
            bottom: idx(self.bottom, other.bottom),
            top: idx(self.top, other.top),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.len()
    }

    pub fn bottom(&self) -> NodeId {
        self.bottom
    }

    pub fn top(&self) -> NodeId {
        self.top
    }

    pub fn name(&self, node: NodeId) -> &str {
        &self.names[node]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn poly(&self, node: NodeId) -> &NumPoly {
        &self.polys[node]
    }

    pub fn rank(&self, node: NodeId) -> BigInt {
        self.polys[node].rank()
    }

    /// `P(E)`.
    pub fn total(&self) -> &NumPoly {
        &self.polys[self.top]
    }

    pub fn leq(&self, a: NodeId, b: NodeId) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: NodeId, b: NodeId) -> bool {
        a != b && self.leq[a][b]
    }

    pub fn meet(&self, a: NodeId, b: NodeId) -> NodeId {
        self.meet[a][b]
    }

    pub fn join(&self, a: NodeId, b: NodeId) -> NodeId {
        self.join[a][b]
    }

    pub fn is_zero_object(&self) -> bool {
        self.top == self.bottom
    }

    /// Covering pairs `(a, b)`: `a < b` with nothing strictly between.
    pub fn covering_pairs(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for a in self.nodes() {
            for b in self.nodes() {
                if self.lt(a, b) && !self.nodes().any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// The interval `[lo, hi]` as a lattice with labels shifted by `-P(lo)`.
    /// Returns the sublattice together with the parent id of each new node.
    pub fn interval(&self, lo: NodeId, hi: NodeId) -> (SubobjectLattice, Vec<NodeId>) {
        assert!(self.leq(lo, hi), "interval needs lo <= hi");
        let parent: Vec<NodeId> = self
            .nodes()
            .filter(|&x| self.leq(lo, x) && self.leq(x, hi))
            .collect();
        let mut local = vec![usize::MAX; self.len()];
        for (i, &p) in parent.iter().enumerate() {
            local[p] = i;
        }
        let shift = &self.polys[lo];
        let sub = SubobjectLattice {
            names: parent.iter().map(|&p| self.names[p].clone()).collect(),
            leq: parent
                .iter()
                .map(|&a| parent.iter().map(|&b| self.leq[a][b]).collect())
                .collect(),
            meet: parent
                .iter()
                .map(|&a| parent.iter().map(|&b| local[self.meet[a][b]]).collect())
                .collect(),
            join: parent
                .iter()
                .map(|&a| parent.iter().map(|&b| local[self.join[a][b]]).collect())
                .collect(),
            polys: parent.iter().map(|&p| &self.polys[p] - shift).collect(),
            bottom: local[lo],
            top: local[hi],
        };
        (sub, parent)
    }

    /// Reduced-polynomial data `(P(F), r(F))` for a nonzero node.
    fn reduced(&self, node: NodeId) -> (RatPoly, BigInt) {
        (self.polys[node].as_poly().clone(), self.rank(node))
    }

    /// Exports the lattice as covering pairs plus labels.
    pub fn to_spec(&self) -> LatticeSpec {
        LatticeSpec {
            nodes: self.names.clone(),
            leq: self
                .covering_pairs()
                .into_iter()
                .map(|(a, b)| (self.names[a].clone(), self.names[b].clone()))
                .collect(),
            leq_kind: RelationKind::Covering,
            polys: self
                .nodes()
                .map(|x| (self.names[x].clone(), self.polys[x].clone()))
                .collect(),
        }
    }
}

/// Checks the lattice axioms and the three labelling invariants exhaustively.
pub fn validate_lattice(lattice: &SubobjectLattice) -> Result<(), LatticeError> {
    let l = lattice;
    let name = |x: NodeId| l.names[x].clone();
    for a in l.nodes() {
        if !l.leq(l.bottom, a) {
            return Err(LatticeError::NoBottom);
        }
        if !l.leq(a, l.top) {
            return Err(LatticeError::NoTop);
        }
        for b in l.nodes() {
            let m = l.meet(a, b);
            if !(l.leq(m, a) && l.leq(m, b))
                || l.nodes()
                    .any(|x| l.leq(x, a) && l.leq(x, b) && !l.leq(x, m))
            {
                return Err(LatticeError::NoMeet(name(a), name(b)));
            }
            let j = l.join(a, b);
            if !(l.leq(a, j) && l.leq(b, j))
                || l.nodes()
                    .any(|x| l.leq(a, x) && l.leq(b, x) && !l.leq(j, x))
            {
                return Err(LatticeError::NoJoin(name(a), name(b)));
            }
        }
    }
    if !l.polys[l.bottom].is_zero() {
        return Err(LatticeError::BottomLabelNonzero(
            l.polys[l.bottom].as_poly().clone(),
        ));
    }
    for a in l.nodes() {
        for b in l.nodes() {
            if l.lt(a, b) && l.polys[a] >= l.polys[b] {
                return Err(LatticeError::StrictMonotonicityViolation {
                    lower: name(a),
                    upper: name(b),
                });
            }
        }
    }
    for a in l.nodes() {
        for b in (a + 1)..l.len() {
            let lhs = &l.polys[l.join(a, b)] + &l.polys[l.meet(a, b)];
            let rhs = &l.polys[a] + &l.polys[b];
            if lhs != rhs {
                return Err(LatticeError::ModularityViolation(name(a), name(b)));
            }
        }
    }
    check_purity(l)
}

fn check_purity(l: &SubobjectLattice) -> Result<(), LatticeError> {
    let expected = l.total().degree();
    for x in l.nodes().filter(|&x| x != l.bottom) {
        let found = l.polys[x].degree();
        if found != expected {
            return Err(LatticeError::PurityViolation {
                node: l.names[x].clone(),
                expected,
                found,
            });
        }
    }
    Ok(())
}

/// Gieseker semistability: `r(E) P(F) <= r(F) P(E)` for every `0 < F < E`.
pub fn is_semistable(lattice: &SubobjectLattice) -> Result<bool, LatticeError> {
    if lattice.is_zero_object() {
        return Err(LatticeError::EmptyObject);
    }
    let e = lattice.reduced(lattice.top);
    Ok(lattice
        .nodes()
        .filter(|&f| f != lattice.bottom && f != lattice.top)
        .all(|f| reduced_cmp(&lattice.reduced(f), &e) != Ordering::Greater))
}

/// Compares `f/r` with `g/s` as `s f` against `r g`.
fn reduced_cmp((f, r): &(RatPoly, BigInt), (g, s): &(RatPoly, BigInt)) -> Ordering {
    debug_assert!(
        r.is_positive() && s.is_positive(),
        "ranks of nonzero pure nodes are positive"
    );
    f.scale_int(s).eventual_cmp(&g.scale_int(r))
}

/// The nonzero node of maximal reduced Hilbert polynomial, and of maximal rank
/// among those. Uniqueness is checked, not assumed.
pub fn max_destabilizer(lattice: &SubobjectLattice) -> Result<NodeId, LatticeError> {
    if lattice.is_zero_object() {
        return Err(LatticeError::EmptyObject);
    }
    let mut best: Vec<NodeId> = Vec::new();
    let mut best_key: Option<(RatPoly, BigInt)> = None;
    for f in lattice.nodes().filter(|&f| f != lattice.bottom) {
        let key = lattice.reduced(f);
        let ord = match &best_key {
            None => Ordering::Greater,
            Some(b) => reduced_cmp(&key, b).then_with(|| key.1.cmp(&b.1)),
        };
        match ord {
            Ordering::Greater => {
                best = vec![f];
                best_key = Some(key);
            }
            Ordering::Equal => best.push(f),
            Ordering::Less => {}
        }
    }
    match best.as_slice() {
        [f] => Ok(*f),
        many => Err(LatticeError::NonUniqueMaximizer(
            many.iter().map(|&x| lattice.names[x].clone()).collect(),
        )),
    }
}

/// The lattice of subobjects of `E / F`: the interval `[F, E]` with labels
/// `P(G) - P(F)`. Purity of the result is checked.
pub fn interval_quotient(
    lattice: &SubobjectLattice,
    node: NodeId,
) -> Result<SubobjectLattice, LatticeError> {
    interval_quotient_with_parents(lattice, node).map(|(q, _)| q)
}

/// As [`interval_quotient`], also returning the parent id of each node.
pub fn interval_quotient_with_parents(
    lattice: &SubobjectLattice,
    node: NodeId,
) -> Result<(SubobjectLattice, Vec<NodeId>), LatticeError> {
    let (q, parents) = lattice.interval(node, lattice.top);
    check_purity(&q)?;
    Ok((q, parents))
}

/// A Harder-Narasimhan filtration `0 = HN_0 < HN_1 < ... < HN_l = E`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HnFiltration {
    /// Names of the steps `HN_0, ..., HN_l`.
    pub steps: Vec<String>,
    /// `P(HN_i) - P(HN_{i-1})` for `i = 1..=l`.
    pub graded: Vec<NumPoly>,
}

impl HnFiltration {
    /// Length `l`.
    pub fn len(&self) -> usize {
        self.graded.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graded.is_empty()
    }

    /// `(P(HN_1), ..., P(HN_l))`, validated as a type.
    pub fn hn_type(&self) -> Result<HnType, HnTypeError> {
        let mut acc = NumPoly::zero();
        let polys = self
            .graded
            .iter()
            .map(|g| {
                acc = &acc + g;
                acc.clone()
            })
            .collect();
        validate_hn_type(polys)
    }
}

/// Iterates [`max_destabilizer`] on successive quotients.
pub fn hn_filtration(lattice: &SubobjectLattice) -> Result<HnFiltration, LatticeError> {
    if lattice.is_zero_object() {
        return Err(LatticeError::EmptyObject);
    }
    let mut step_ids = vec![lattice.bottom];
    let mut current = lattice.clone();
    let mut to_root: Vec<NodeId> = lattice.nodes().collect();
    while !current.is_zero_object() {
        let m = max_destabilizer(&current)?;
        step_ids.push(to_root[m]);
        let (next, parents) = interval_quotient_with_parents(&current, m)?;
        to_root = parents.iter().map(|&p| to_root[p]).collect();
        current = next;
    }
    let graded: Vec<NumPoly> = step_ids
        .windows(2)
        .map(|w| lattice.poly(w[1]) - lattice.poly(w[0]))
        .collect();
    for (i, w) in step_ids.windows(2).enumerate() {
        let (piece, _) = lattice.interval(w[0], w[1]);
        if !is_semistable(&piece)? {
            return Err(LatticeError::PostconditionFailed(format!(
                "graded piece {} is not semistable",
                i + 1
            )));
        }
    }
    for (i, w) in graded.windows(2).enumerate() {
        let a = (w[0].as_poly().clone(), w[0].rank());
        let b = (w[1].as_poly().clone(), w[1].rank());
        if reduced_cmp(&a, &b) != Ordering::Greater {
            return Err(LatticeError::PostconditionFailed(format!(
                "graded slopes {} and {} do not strictly decrease",
                i + 1,
                i + 2
            )));
        }
    }
    Ok(HnFiltration {
        steps: step_ids.iter().map(|&x| lattice.names[x].clone()).collect(),
        graded,
    })
}

/// `(P(HN_1), ..., P(HN_l))`; lands in the set of types.
pub fn hn_type(lattice: &SubobjectLattice) -> Result<HnType, LatticeError> {
    Ok(hn_filtration(lattice)?.hn_type()?)
}

/// Given `HN(E) <= tau`, a node with `P(F) = f_1` must be the maximal
/// destabilizer. Returns it if one exists.
pub fn forced_first_step(
    lattice: &SubobjectLattice,
    tau: &HnType,
) -> Result<Option<NodeId>, LatticeError> {
    let found = hn_type(lattice)?;
    if !hnt_leq(&found, tau) {
        return Err(LatticeError::HypothesisViolation {
            found,
            bound: tau.clone(),
        });
    }
    let hits: Vec<NodeId> = lattice
        .nodes()
        .filter(|&x| lattice.poly(x) == tau.first())
        .collect();
    match hits.as_slice() {
        [] => Ok(None),
        [f] => {
            let m = max_destabilizer(lattice)?;
            if m != *f {
                return Err(LatticeError::PostconditionFailed(format!(
                    "node {:?} has P = f_1 but the maximal destabilizer is {:?}",
                    lattice.name(*f),
                    lattice.name(m)
                )));
            }
            Ok(Some(*f))
        }
        many => Err(LatticeError::PostconditionFailed(format!(
            "several nodes have P = f_1: {:?}",
            many.iter().map(|&x| lattice.name(x)).collect::<Vec<_>>()
        ))),
    }
}

/// A split bundle `O(a_1) + ... + O(a_n)` on the projective line, degrees
/// kept in decreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SplittingSpec", into = "SplittingSpec")]
pub struct SplittingType {
    degrees: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SplittingSpec {
    degrees: Vec<i64>,
}

impl TryFrom<SplittingSpec> for SplittingType {
    type Error = LatticeError;
    fn try_from(spec: SplittingSpec) -> Result<Self, LatticeError> {
        SplittingType::new(spec.degrees)
    }
}

impl From<SplittingType> for SplittingSpec {
    fn from(s: SplittingType) -> Self {
        SplittingSpec { degrees: s.degrees }
    }
}

impl SplittingType {
    pub fn new(mut degrees: Vec<i64>) -> Result<Self, LatticeError> {
        if degrees.is_empty() {
            return Err(LatticeError::EmptySplitting);
        }
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Ok(SplittingType { degrees })
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    /// Node name of each summand: `O(a)`, or `O(a)[k]` when `a` repeats.
    fn summand_names(&self) -> Vec<String> {
        let mut seen: HashMap<i64, usize> = HashMap::new();
        self.degrees
            .iter()
            .map(|&a| {
                let count = self.degrees.iter().filter(|&&b| b == a).count();
                let k = seen.entry(a).or_insert(0);
                *k += 1;
                if count == 1 {
                    format!("O({a})")
                } else {
                    format!("O({a})[{k}]")
                }
            })
            .collect()
    }

    /// Total Hilbert polynomial `r λ + sum(a_i) + r`.
    pub fn total_poly(&self) -> NumPoly {
        self.degrees
            .iter()
            .fold(NumPoly::zero(), |acc, &a| &acc + &hilbert_poly_splitting(a))
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.degrees.iter().map(i64::to_string).collect();
        write!(f, "({})", d.join(","))
    }
}

/// Hilbert polynomial of `O(a)` on the projective line: `λ + a + 1`.
pub fn hilbert_poly_splitting(a: i64) -> NumPoly {
    NumPoly::from_ints(&[a + 1, 1])
}

/// The Boolean lattice of sub-sums of the (indexed) summands.
pub fn lattice_from_splitting(s: &SplittingType) -> SubobjectLattice {
    let names = s.summand_names();
    let mut blocks = s
        .degrees
        .iter()
        .zip(names)
        .map(|(&a, name)| SubobjectLattice::chain(vec![name], vec![hilbert_poly_splitting(a)]));
    let first = blocks.next().expect("splitting types are nonempty");
    blocks.fold(first, |acc, b| acc.product(&b))
}

/// Groups summands of equal degree, largest degree first.
pub fn hn_closed_form(s: &SplittingType) -> HnFiltration {
    let names = s.summand_names();
    let mut steps = vec!["0".to_string()];
    let mut graded = Vec::new();
    let mut i = 0;
    while i < s.degrees.len() {
        let a = s.degrees[i];
        let j = i + s.degrees[i..].iter().take_while(|&&b| b == a).count();
        let m = (j - i) as i64;
        graded.push(NumPoly::from_ints(&[m * (a + 1), m]));
        steps.push(names[..j].join("+"));
        i = j;
    }
    HnFiltration { steps, graded }
}

/// Which pairs the `leq` field of a JSON lattice lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    /// Generating pairs (typically covering pairs); the closure is taken.
    #[default]
    Covering,
    /// The full order relation; must already be transitive.
    Full,
}

/// JSON form of a lattice:
/// `{"nodes": [...], "leq": [[a, b], ...], "leq_kind": "covering"|"full", "P": {id: poly}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub nodes: Vec<String>,
    pub leq: Vec<(String, String)>,
    #[serde(default)]
    pub leq_kind: RelationKind,
    #[serde(rename = "P")]
    pub polys: BTreeMap<String, NumPoly>,
}

impl LatticeSpec {
    pub fn build(&self) -> Result<SubobjectLattice, LatticeError> {
        let mut index = HashMap::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if index.insert(n.as_str(), i).is_some() {
                return Err(LatticeError::DuplicateNode(n.clone()));
            }
        }
        let lookup = |n: &String| {
            index
                .get(n.as_str())
                .copied()
                .ok_or_else(|| LatticeError::UnknownNode(n.clone()))
        };
        let relation = self
            .leq
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>, LatticeError>>()?;
        for key in self.polys.keys() {
            lookup(key)?;
        }
        let polys = self
            .nodes
            .iter()
            .map(|n| {
                self.polys
                    .get(n)
                    .cloned()
                    .ok_or_else(|| LatticeError::MissingLabel(n.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if self.leq_kind == RelationKind::Full {
            let n = self.nodes.len();
            let mut rel = vec![vec![false; n]; n];
            for (i, row) in rel.iter_mut().enumerate() {
                row[i] = true;
            }
            for &(a, b) in &relation {
                rel[a][b] = true;
            }
            for &(a, b) in &relation {
                for c in (0..n).filter(|&c| rel[b][c]) {
                    if !rel[a][c] {
                        let nm = |x: usize| self.nodes[x].clone();
                        return Err(LatticeError::NotTransitive(nm(a), nm(b), nm(c)));
                    }
                }
            }
        }
        SubobjectLattice::from_relation(self.nodes.clone(), &relation, polys)
    }
}

/// Either JSON input accepted where a lattice is expected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeInput {
    Splitting(SplittingType),
    Lattice(LatticeSpec),
}

impl LatticeInput {
    pub fn build(&self) -> Result<SubobjectLattice, LatticeError> {
        match self {
            LatticeInput::Splitting(s) => Ok(lattice_from_splitting(s)),
            LatticeInput::Lattice(spec) => spec.build(),
        }
    }
}

/// Brute-force enumeration used to cross-check [`hn_filtration`].
pub mod oracle {
    use super::*;

    /// Every strictly increasing chain `0 < c_1 < ... < E` whose graded
    /// intervals are semistable and whose graded reduced polynomials strictly
    /// decrease. Reduced polynomials are compared by sampling far beyond the
    /// root bound of their cross-multiplied difference.
    pub fn admissible_chains(lattice: &SubobjectLattice) -> Vec<Vec<NodeId>> {
        let mut out = Vec::new();
        if lattice.is_zero_object() {
            return out;
        }
        let mut chain = vec![lattice.bottom()];
        extend(lattice, &mut chain, None, &mut out);
        out
    }

    fn extend(
        l: &SubobjectLattice,
        chain: &mut Vec<NodeId>,
        last: Option<(RatPoly, BigInt)>,
        out: &mut Vec<Vec<NodeId>>,
    ) {
        let cur = *chain.last().unwrap();
        if cur == l.top() {
            out.push(chain.clone());
            return;
        }
        for next in l.nodes().filter(|&x| l.lt(cur, x)) {
            let piece = (
                l.poly(next).as_poly() - l.poly(cur).as_poly(),
                l.rank(next) - l.rank(cur),
            );
            if piece.1 <= BigInt::zero() {
                continue;
            }
            if let Some(prev) = &last {
                if sampled_cmp(prev, &piece) != Ordering::Greater {
                    continue;
                }
            }
            if !interval_semistable(l, cur, next) {
                continue;
            }
            chain.push(next);
            extend(l, chain, Some(piece), out);
            chain.pop();
        }
    }

    fn interval_semistable(l: &SubobjectLattice, lo: NodeId, hi: NodeId) -> bool {
        let base = l.poly(lo).as_poly();
        let whole = (l.poly(hi).as_poly() - base, l.rank(hi) - l.rank(lo));
        l.nodes().filter(|&c| l.lt(lo, c) && l.lt(c, hi)).all(|c| {
            let sub = (l.poly(c).as_poly() - base, l.rank(c) - l.rank(lo));
            sub.1 > BigInt::zero() && sampled_cmp(&sub, &whole) != Ordering::Greater
        })
    }

    fn sampled_cmp((f, r): &(RatPoly, BigInt), (g, s): &(RatPoly, BigInt)) -> Ordering {
        let lhs = f.scale_int(s);
        let rhs = g.scale_int(r);
        match lhs.stabilization_bound(&rhs) {
            Err(_) => Ordering::Equal,
            Ok(m) => lhs.evaluate(&m).cmp(&rhs.evaluate(&m)),
        }
    }
}
