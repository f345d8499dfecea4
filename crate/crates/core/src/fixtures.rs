//! Random inputs for property tests and the acceptance suite: splitting
//! types, HN types of bounded length, product lattices, and semicontinuous
//! families over random finite spaces.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::family::{FiniteSpace, SheafFamily};
use crate::hntype::HnType;
use crate::lattice::{hn_type, lattice_from_splitting, SplittingType, SubobjectLattice};
use crate::numpoly::{NumPoly, RatPoly, Rational};

/// Up to `max_summands` degrees drawn uniformly from `lo..=hi`.
pub fn random_splitting<R: Rng>(
    rng: &mut R,
    max_summands: usize,
    lo: i64,
    hi: i64,
) -> SplittingType {
    let n = rng.gen_range(1..=max_summands);
    SplittingType::new((0..n).map(|_| rng.gen_range(lo..=hi)).collect())
        .expect("at least one summand")
}

/// A splitting type with exactly `len` distinct degrees in `[-5, 5]` and at
/// most 8 summands, so its HN type has length `len`.
pub fn splitting_with_length<R: Rng>(rng: &mut R, len: usize) -> SplittingType {
    assert!((1..=8).contains(&len));
    let mut pool: Vec<i64> = (-5..=5).collect();
    pool.shuffle(rng);
    let mut degrees: Vec<i64> = pool[..len].to_vec();
    let extra = rng.gen_range(0..=(8 - len));
    for _ in 0..extra {
        let d = degrees[rng.gen_range(0..len)];
        degrees.push(d);
    }
    SplittingType::new(degrees).expect("nonempty")
}

/// A valid HN type of length in `min_len..=max_len`, realised by a split bundle.
pub fn random_hn_type<R: Rng>(rng: &mut R, min_len: usize, max_len: usize) -> HnType {
    let len = rng.gen_range(min_len..=max_len);
    hn_type(&lattice_from_splitting(&splitting_with_length(rng, len)))
        .expect("split bundles have HN types")
}

/// A random numerical polynomial of degree `d` with positive rank, given by
/// integer binomial-basis coefficients.
pub fn random_piece<R: Rng>(rng: &mut R, d: usize) -> NumPoly {
    let mut coeffs: Vec<Rational> = (0..d)
        .map(|_| Rational::from_integer(rng.gen_range(-4i64..=4).into()))
        .collect();
    let lead = if d == 0 {
        rng.gen_range(1i64..=4)
    } else {
        rng.gen_range(1i64..=3)
    };
    coeffs.push(Rational::from_integer(lead.into()));
    NumPoly::new(RatPoly::from_binomial(&coeffs)).expect("integral binomial coefficients")
}

/// A product of small chains and diamonds `M_k`, with at most `max_nodes`
/// nodes and labels of a common random degree in `0..=2`. Products of
/// modular lattices with additive labels satisfy every lattice invariant.
pub fn random_lattice<R: Rng>(rng: &mut R, max_nodes: usize) -> SubobjectLattice {
    let d = rng.gen_range(0..=2);
    let blocks = rng.gen_range(1..=4);
    let mut acc: Option<SubobjectLattice> = None;
    for b in 0..blocks {
        let block = if rng.gen_bool(0.7) {
            let len = rng.gen_range(1..=3);
            let mut label = NumPoly::zero();
            let mut labels = Vec::new();
            for _ in 0..len {
                label = &label + &random_piece(rng, d);
                labels.push(label.clone());
            }
            SubobjectLattice::chain((1..=len).map(|j| format!("c{b}.{j}")).collect(), labels)
        } else {
            let k = rng.gen_range(2..=3);
            SubobjectLattice::diamond(
                (1..=k).map(|i| format!("d{b}.{i}")).collect(),
                format!("d{b}.top"),
                random_piece(rng, d),
            )
        };
        let size = acc.as_ref().map_or(1, SubobjectLattice::len) * block.len();
        if size > max_nodes {
            break;
        }
        acc = Some(match acc {
            None => block,
            Some(l) => l.product(&block),
        });
    }
    acc.unwrap_or_else(|| {
        SubobjectLattice::chain(vec!["c0.1".to_string()], vec![random_piece(rng, d)])
    })
}

/// Splitting types of the given rank and total degree, with degrees in `[-4, 4]`.
pub fn splitting_with_total<R: Rng>(rng: &mut R, rank: usize, total: i64) -> SplittingType {
    loop {
        let mut degrees: Vec<i64> = (0..rank - 1).map(|_| rng.gen_range(-4..=4)).collect();
        let last = total - degrees.iter().sum::<i64>();
        if (-4..=4).contains(&last) {
            degrees.push(last);
            return SplittingType::new(degrees).expect("nonempty");
        }
    }
}

/// A family of split bundles over a random finite space of
/// `min_points..=max_points` points. Points fall into one or two groups of
/// constant rank and degree; specializations are only added inside a group
/// and only from a type to a type above it, so the family is semicontinuous
/// and flat by construction.
pub fn random_family<R: Rng>(rng: &mut R, min_points: usize, max_points: usize) -> SheafFamily {
    let n = rng.gen_range(min_points..=max_points);
    let groups = rng.gen_range(1..=2);
    let pools: Vec<Vec<(SplittingType, HnType)>> = (0..groups)
        .map(|_| {
            let rank = rng.gen_range(2..=4);
            let total = rng.gen_range(-3..=3);
            let size = rng.gen_range(2..=4);
            (0..size)
                .map(|_| {
                    let s = splitting_with_total(rng, rank, total);
                    let t =
                        hn_type(&lattice_from_splitting(&s)).expect("split bundles have HN types");
                    (s, t)
                })
                .collect()
        })
        .collect();
    let assignment: Vec<(usize, usize)> = (0..n)
        .map(|_| {
            let g = rng.gen_range(0..groups);
            (g, rng.gen_range(0..pools[g].len()))
        })
        .collect();
    let edge_prob = rng.gen_range(0.15..0.5);
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let ((ga, ia), (gb, ib)) = (assignment[a], assignment[b]);
            if a != b
                && ga == gb
                && rng.gen_bool(edge_prob)
                && pools[ga][ia].1.leq(&pools[gb][ib].1)
            {
                pairs.push((a, b));
            }
        }
    }
    let names = (0..n).map(|i| format!("s{i}")).collect();
    let fibers = assignment
        .iter()
        .map(|&(g, i)| lattice_from_splitting(&pools[g][i].0))
        .collect();
    SheafFamily::new(FiniteSpace::new(names, &pairs), fibers).expect("generated families are valid")
}
