//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use common::*;
use dissecta::bitset::BitSet;
use dissecta::catalog;
use dissecta::dissection::f_polynomial;
use dissecta::dissection::{
    chamber_statistic, face_counts, identity_report, mobius_polynomial, set_oracle_check,
    Corollary, FConvention, FaceProfile, SetValuation,
};
use dissecta::incidence::{mobius_invert, sum_transform, Direction, IncidenceFunction};
use dissecta::io::{PosetDoc, DEFAULT_MAX_ELEMENTS};
use dissecta::lattice::{join_irreducibles, principal_prime_ideals, structure_check, Lattice};
use dissecta::mobius_algebra::{GroupVector, MobiusAlgebra};
use dissecta::polynomial::{Poly, Poly2};
use dissecta::valuation::{
    n_presentation, val_invariants, valuation_defect, zaslavsky_check_with, ValuationTable,
};
use dissecta::zlinalg::{determinant, hermite, smith, subgroup_membership, IntegerMatrix};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Suite {
    failures: Vec<usize>,
}

impl Suite {
    fn run(
        &mut self,
        id: usize,
        name: &str,
        limit: Option<Duration>,
        body: impl FnOnce() -> Outcome,
    ) {
        let start = Instant::now();
        let mut outcome = body();
        let elapsed = start.elapsed();
        if let (Ok(()), Some(limit)) = (&outcome, limit) {
            if elapsed > limit {
                outcome = Err(format!("took {elapsed:.2?}, limit {limit:.2?}"));
            }
        }
        match outcome {
            Ok(()) => println!("criterion {id:>2}: PASS  {name} ({elapsed:.2?})"),
            Err(why) => {
                println!("criterion {id:>2}: FAIL  {name} ({elapsed:.2?}): {why}");
                self.failures.push(id);
            }
        }
    }
}

fn data(name: &str) -> String {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/");
    std::fs::read_to_string(format!("{path}{name}")).expect("bundled data file")
}

fn c1_sphere() -> Outcome {
    let doc = PosetDoc::parse(&data("sphere.json")).map_err(|e| e.to_string())?;
    let ap = doc
        .to_arrangement(DEFAULT_MAX_ELEMENTS)
        .map_err(|e| e.to_string())?;
    ensure(ap.len() == 7, || format!("{} flats", ap.len()))?;
    let s = chamber_statistic(&ap, Some(1)).map_err(|e| e.to_string())?;
    ensure(s.sum == 6, || format!("sum {}", s.sum))?;
    ensure(s.count == Some(Rational64::from_integer(6)), || {
        format!("count {:?}", s.count)
    })
}

fn c2_plane() -> Outcome {
    let doc = PosetDoc::parse(&data("plane.json")).map_err(|e| e.to_string())?;
    let ap = doc
        .to_arrangement(DEFAULT_MAX_ELEMENTS)
        .map_err(|e| e.to_string())?;
    ensure(ap.chis() == [1, -1, -1, 0, 3, 10, 2], || {
        format!("chi {:?}", ap.chis())
    })?;
    let s = chamber_statistic(&ap, Some(1)).map_err(|e| e.to_string())?;
    ensure(s.sum == 18, || format!("sum {}", s.sum))?;
    ensure(s.count == Some(Rational64::from_integer(18)), || {
        format!("count {:?}", s.count)
    })
}

fn c3_mobius() -> Outcome {
    let mut rng = rng(3);
    for trial in 0..200 {
        let n = rng.gen_range(1..=64);
        let density = rng.gen_range(0.02..0.3);
        let p = random_poset(&mut rng, n, density);
        let zeta = IncidenceFunction::zeta(&p);
        let delta = IncidenceFunction::delta(&p);
        let mu = IncidenceFunction::mobius(&p).map_err(|e| e.to_string())?;
        let zm = zeta.convolve(&mu).map_err(|e| e.to_string())?;
        let mz = mu.convolve(&zeta).map_err(|e| e.to_string())?;
        ensure(zm == delta && mz == delta, || {
            format!("trial {trial}: ζμ or μζ ≠ δ")
        })?;
        let dim = rng.gen_range(1..=2);
        let values = random_vector(&mut rng, n * dim, 1000);
        for direction in [Direction::Down, Direction::Up] {
            let g = sum_transform(&p, &values, dim, direction).map_err(|e| e.to_string())?;
            let back = mobius_invert(&mu, &g, dim, direction).map_err(|e| e.to_string())?;
            ensure(back == values, || {
                format!("trial {trial}: {direction:?} inversion")
            })?;
        }
    }
    Ok(())
}

fn random_members(rng: &mut impl Rng, n: usize, bottom: usize) -> BitSet {
    let mut m = BitSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.6)));
    m.insert(bottom);
    m
}

fn c4_idempotents() -> Outcome {
    let mut rng = rng(4);
    let mut lattice_hosts = 0;
    for trial in 0..100 {
        let n = rng.gen_range(1..=20);
        let density = rng.gen_range(0.05..0.4);
        let p = random_poset_with_bottom(&mut rng, n, density);
        let alg = MobiusAlgebra::new(&p).map_err(|e| e.to_string())?;
        let us: Vec<GroupVector> = (0..n).map(|a| alg.u(a)).collect();
        for a in 0..n {
            for b in 0..n {
                let prod = alg.product(&us[a], &us[b]).map_err(|e| e.to_string())?;
                let want = if a == b {
                    us[a].clone()
                } else {
                    GroupVector::zero(&p)
                };
                ensure(prod == want, || format!("trial {trial}: u({a})u({b})"))?;
            }
        }
        for x in 0..n {
            let sum = p
                .down(x)
                .iter()
                .fold(GroupVector::zero(&p), |acc, a| &acc + &us[a]);
            ensure(sum == GroupVector::unit(&p, x), || {
                format!("trial {trial}: Σ u(a ⪯ {x}) ≠ {x}")
            })?;
        }

        let members = random_members(&mut rng, n, alg.bottom());
        for _ in 0..5 {
            let x = GroupVector::from_coeffs(&p, random_vector(&mut rng, n, 4));
            let y = GroupVector::from_coeffs(&p, random_vector(&mut rng, n, 4));
            let xy = alg.product(&x, &y).map_err(|e| e.to_string())?;
            let rx = alg.restrict_j(&members, &x).map_err(|e| e.to_string())?;
            let ry = alg.restrict_j(&members, &y).map_err(|e| e.to_string())?;
            let rxy = alg.restrict_j(&members, &xy).map_err(|e| e.to_string())?;
            let sub = MobiusAlgebra::new(rx.host()).map_err(|e| e.to_string())?;
            let prod = sub.product(&rx, &ry).map_err(|e| e.to_string())?;
            ensure(prod == rxy, || {
                format!("trial {trial}: restrict_j not multiplicative")
            })?;
        }

        if let Ok(l) = Lattice::from_poset(Arc::clone(&p)) {
            lattice_hosts += 1;
            check_meet_products(&l, &alg).map_err(|e| format!("trial {trial}: {e}"))?;
        }
    }
    for k in [2, 3, 4, 5] {
        let s = random_set_lattice(&mut rng, k, 20);
        let alg = MobiusAlgebra::new(s.lattice.poset()).map_err(|e| e.to_string())?;
        check_meet_products(&s.lattice, &alg)?;
        lattice_hosts += 1;
    }
    ensure(lattice_hosts >= 10, || {
        format!("only {lattice_hosts} lattice hosts")
    })
}

fn check_meet_products(l: &Lattice, alg: &MobiusAlgebra) -> Outcome {
    let p = l.poset();
    for a in 0..l.len() {
        for b in 0..l.len() {
            let prod = alg
                .product(&GroupVector::unit(p, a), &GroupVector::unit(p, b))
                .map_err(|e| e.to_string())?;
            ensure(prod == GroupVector::unit(p, l.meet(a, b)), || {
                format!("a·b ≠ a∧b at ({a}, {b})")
            })?;
        }
    }
    Ok(())
}

fn c5_cancellation() -> Outcome {
    let mut named: Vec<(String, Lattice, Option<bool>)> = vec![
        ("B2".into(), catalog::boolean_lattice(2), Some(true)),
        ("B3".into(), catalog::boolean_lattice(3), Some(true)),
        ("B4".into(), catalog::boolean_lattice(4), Some(true)),
        ("N5".into(), catalog::pentagon(), Some(false)),
        ("M3".into(), catalog::diamond_m3(), Some(false)),
    ];
    for n in 1..=6 {
        named.push((format!("chain {n}"), catalog::chain(n), Some(true)));
    }
    let mut rng = rng(5);
    for i in 0..100 {
        let k = rng.gen_range(3..=5);
        named.push((
            format!("random {i}"),
            random_set_lattice(&mut rng, k, 64).lattice,
            Some(true),
        ));
    }
    for (name, l, expect) in &named {
        let flags = structure_check(l);
        ensure(flags.distributive == flags.cancellation, || {
            format!("{name}: {flags:?}")
        })?;
        if let Some(d) = expect {
            ensure(flags.distributive == *d, || {
                format!("{name}: distributive = {}", flags.distributive)
            })?;
        }
    }
    Ok(())
}

/// B₃, B₄ and 100 random distributive lattices of at most 40 elements.
fn distributive_family() -> Vec<(String, Lattice)> {
    let mut out = vec![
        ("B3".to_owned(), catalog::boolean_lattice(3)),
        ("B4".to_owned(), catalog::boolean_lattice(4)),
    ];
    let mut rng = rng(6);
    for i in 0..100 {
        let k = rng.gen_range(3..=5);
        out.push((
            format!("random {i}"),
            random_set_lattice(&mut rng, k, 40).lattice,
        ));
    }
    out
}

fn c6_n_membership() -> Outcome {
    let mut rng = rng(66);
    for (name, l) in distributive_family() {
        let ji = join_irreducibles(&l).map_err(|e| e.to_string())?;
        let inv = val_invariants(&l).map_err(|e| e.to_string())?;
        ensure(inv.distributive, || format!("{name}: not distributive"))?;
        ensure(
            inv.free_rank == ji.elements.len() && inv.torsion.is_empty(),
            || {
                format!(
                    "{name}: free rank {} torsion {:?} with |ji| = {}",
                    inv.free_rank,
                    inv.torsion,
                    ji.elements.len()
                )
            },
        )?;
        let pres = n_presentation(&l);
        let ji_set = ji.as_set(l.len());
        let mut choices = vec![ji_set.clone(), BitSet::full(l.len())];
        choices.extend((0..3).map(|_| random_superset(&mut rng, &ji_set)));
        for m in choices {
            let verdicts = zaslavsky_check_with(&pres, &m).map_err(|e| e.to_string())?;
            if let Some((a, _)) = verdicts.iter().find(|(_, ok)| !ok) {
                return Err(format!("{name}: u_M({}) ∉ N(L)", l.poset().id(*a)));
            }
        }
    }
    Ok(())
}

fn c7_valuation_corollary() -> Outcome {
    let mut rng = rng(7);
    for (name, l) in distributive_family() {
        let n = l.len();
        let ji = join_irreducibles(&l).map_err(|e| e.to_string())?;
        let ji_set = ji.as_set(n);
        let mut tables = vec![
            ValuationTable::constant(&l, 1),
            ValuationTable::constant(&l, -7),
        ];
        tables.extend(
            principal_prime_ideals(&l)
                .iter()
                .map(|p| ValuationTable::indicator(&l, p)),
        );
        let sets: Vec<u64> = sets_of(&l);
        let card = ValuationTable::from_fn(&l, 1, |a| vec![i64::from(sets[a].count_ones())]);
        tables.push(card);
        for m in [
            ji_set.clone(),
            BitSet::full(n),
            random_superset(&mut rng, &ji_set),
        ] {
            for f in &tables {
                for a in m.iter().filter(|&a| !ji.contains(a)) {
                    let d = valuation_defect(&l, &m, f, a).map_err(|e| format!("{name}: {e}"))?;
                    ensure(d.iter().all(|&v| v == 0), || {
                        format!("{name}: defect {d:?} at {}", l.poset().id(a))
                    })?;
                }
            }
        }
    }
    let b2 = catalog::boolean_lattice(2);
    let bad = ValuationTable::indicator(&b2, &BitSet::from_indices(4, [3]));
    ensure(!bad.is_valuation(&b2), || {
        "indicator of the top accepted as a valuation".into()
    })?;
    let n5 = catalog::pentagon();
    let bad = ValuationTable::from_fn(&n5, 1, |a| vec![a as i64 * a as i64]);
    ensure(!bad.is_valuation(&n5), || {
        "square table on N5 accepted".into()
    })
}

/// Recovers the sets behind a lattice built by [`random_set_lattice`] or the
/// Boolean catalog from its element labels.
fn sets_of(l: &Lattice) -> Vec<u64> {
    l.poset()
        .ids()
        .iter()
        .map(|id| {
            if let Some(inner) = id.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
                inner
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(|k| 1u64 << (k.parse::<u32>().expect("point label") - 1))
                    .fold(0, |a, b| a | b)
            } else {
                id.parse::<u64>().expect("boolean lattice label is a mask")
            }
        })
        .collect()
}

fn c8_set_oracle() -> Outcome {
    let mut rng = rng(8);
    for trial in 0..200 {
        let n = rng.gen_range(1..=10);
        let model = random_set_model(&mut rng, n, 3);
        let weights = SetValuation::PointWeights(random_vector(&mut rng, n, 5));
        for f in [SetValuation::Cardinality, weights] {
            let r = set_oracle_check(&model, &f).map_err(|e| format!("trial {trial}: {e}"))?;
            ensure(r.equal, || {
                format!("trial {trial}: lhs {} rhs {}", r.lhs, r.rhs)
            })?;
            let d = r
                .d_lattice
                .as_ref()
                .ok_or_else(|| format!("trial {trial}: D(L) skipped"))?;
            ensure(d.ji_ok, || format!("trial {trial}: ji(D(L)) escapes"))?;
            ensure(d.zero_sum != Some(false), || {
                format!("trial {trial}: D(L) sum nonzero")
            })?;
            ensure(r.holds(), || format!("trial {trial}: report does not hold"))?;
        }
    }
    Ok(())
}

fn c9_faces() -> Outcome {
    let lines = PosetDoc::parse(&data("two_lines.json"))
        .and_then(|d| d.to_arrangement(DEFAULT_MAX_ELEMENTS))
        .map_err(|e| e.to_string())?;
    let circles = PosetDoc::parse(&data("two_circles.json"))
        .and_then(|d| d.to_arrangement(DEFAULT_MAX_ELEMENTS))
        .map_err(|e| e.to_string())?;
    let profile = FaceProfile::alternating(2);
    let f = face_counts(&lines, &profile).map_err(|e| e.to_string())?;
    let want: BTreeMap<u32, Rational64> = [(0, 1), (1, 4), (2, 4)]
        .map(|(k, v)| (k, Rational64::from_integer(v)))
        .into();
    ensure(f == want, || format!("face counts {f:?}"))?;
    let literal =
        f_polynomial(&lines, &profile, FConvention::Literal).map_err(|e| e.to_string())?;
    ensure(literal == Poly::from_ints(&[1, 4, 4]), || {
        format!("literal polynomial {literal}")
    })?;
    let m_want = Poly2::from_terms([
        ((2, 2), 1),
        ((2, 1), -2),
        ((2, 0), 1),
        ((1, 2), -2),
        ((1, 1), 2),
        ((0, 2), 1),
    ]);
    for ap in [&lines, &circles] {
        let m = mobius_polynomial(ap).map_err(|e| e.to_string())?;
        ensure(m == m_want, || format!("M(x, y) = {m}"))?;
    }
    let r68 = identity_report(&lines, Corollary::Cor68).map_err(|e| e.to_string())?;
    ensure(r68.holds(), || format!("cor68: {} vs {}", r68.lhs, r68.rhs))?;
    ensure(r68.lhs_at_one == Rational64::from_integer(9), || {
        format!("cor68 lhs(1) = {}", r68.lhs_at_one)
    })?;
    let r69 = identity_report(&circles, Corollary::Cor69).map_err(|e| e.to_string())?;
    ensure(r69.holds(), || format!("cor69: {} vs {}", r69.lhs, r69.rhs))?;
    ensure(r69.lhs == Poly::from_ints(&[2, 0, 8]), || {
        format!("cor69 lhs {}", r69.lhs)
    })?;
    ensure(r69.lhs_at_one == r69.total_faces, || "cor69 total".into())?;
    ensure(r69.total_faces == Rational64::from_integer(10), || {
        format!("cor69 faces {}", r69.total_faces)
    })
}

fn is_unimodular(m: &IntegerMatrix) -> bool {
    determinant(m).abs().is_one()
}

fn check_hermite_shape(d: &IntegerMatrix, pivots: &[usize]) -> bool {
    for (i, &c) in pivots.iter().enumerate() {
        if !d.get(i, c).is_positive() || (0..c).any(|j| !d.get(i, j).is_zero()) {
            return false;
        }
        if i > 0 && pivots[i - 1] >= c {
            return false;
        }
        for r in 0..i {
            let x = d.get(r, c);
            if x.is_negative() || x >= d.get(i, c) {
                return false;
            }
        }
    }
    (pivots.len()..d.rows()).all(|i| d.row(i).iter().all(Zero::is_zero))
}

fn check_smith_shape(d: &IntegerMatrix) -> bool {
    let mut prev: Option<BigInt> = None;
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            if i != j && !d.get(i, j).is_zero() {
                return false;
            }
        }
        if i < d.cols() {
            let x = d.get(i, i).clone();
            if x.is_negative() {
                return false;
            }
            if let Some(p) = &prev {
                if p.is_zero() && !x.is_zero() {
                    return false;
                }
                if !p.is_zero() && !(&x % p).is_zero() {
                    return false;
                }
            }
            prev = Some(x);
        }
    }
    true
}

fn random_test_matrix(rng: &mut impl Rng) -> IntegerMatrix {
    let rows = rng.gen_range(1..=8);
    let cols = rng.gen_range(1..=8);
    match rng.gen_range(0..3) {
        0 => random_matrix(rng, rows, cols, 1_000_000),
        1 => random_matrix(rng, rows, cols, 9),
        _ => {
            // rank-deficient product
            let k = rng.gen_range(1..=rows.min(cols));
            random_matrix(rng, rows, k, 30).mul(&random_matrix(rng, k, cols, 30))
        }
    }
}

/// Membership via the Smith form: `v = c·A` iff `w = v·V` has `w_i`
/// divisible by `d_i` for `i < rank` and zero after.
fn smith_member(a: &IntegerMatrix, v: &[BigInt]) -> bool {
    let nf = smith(a);
    let vv = nf.v.as_ref().expect("Smith keeps V");
    let w: Vec<BigInt> = (0..a.cols())
        .map(|j| (0..a.cols()).map(|i| &v[i] * vv.get(i, j)).sum())
        .collect();
    w.iter().enumerate().all(|(i, x)| {
        let d = if i < a.rows() {
            nf.d.get(i, i).clone()
        } else {
            BigInt::zero()
        };
        if d.is_zero() {
            x.is_zero()
        } else {
            (x % d).is_zero()
        }
    })
}

fn brute_member(a: &IntegerMatrix, v: &[BigInt], bound: i64) -> bool {
    let k = a.rows();
    let mut c = vec![-bound; k];
    loop {
        let coeffs: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        if a.left_mul_vec(&coeffs) == v {
            return true;
        }
        let mut i = 0;
        while i < k && c[i] == bound {
            c[i] = -bound;
            i += 1;
        }
        if i == k {
            return false;
        }
        c[i] += 1;
    }
}

fn c10_zlinalg() -> Outcome {
    let mut rng = rng(10);
    for trial in 0..500 {
        let a = random_test_matrix(&mut rng);
        let h = hermite(&a);
        ensure(h.reconstructs(&a), || format!("trial {trial}: U·A ≠ H"))?;
        ensure(is_unimodular(&h.u), || {
            format!("trial {trial}: Hermite U not unimodular")
        })?;
        ensure(check_hermite_shape(&h.d, &h.pivots), || {
            format!("trial {trial}: not in Hermite form")
        })?;
        let s = smith(&a);
        ensure(s.reconstructs(&a), || format!("trial {trial}: U·A·V ≠ D"))?;
        let v = s.v.as_ref().ok_or("Smith without V")?;
        ensure(is_unimodular(&s.u) && is_unimodular(v), || {
            format!("trial {trial}: Smith transforms")
        })?;
        ensure(check_smith_shape(&s.d), || {
            format!("trial {trial}: not in Smith form")
        })?;
        ensure(s.rank() == h.rank(), || {
            format!("trial {trial}: ranks differ")
        })?;
    }
    let (mut members, mut non_members) = (0, 0);
    for trial in 0..200 {
        let (rows, cols) = (4, 6);
        let a = random_matrix(&mut rng, rows, cols, 3);
        let v: Vec<BigInt> = if rng.gen_bool(0.5) {
            let c: Vec<BigInt> = random_vector(&mut rng, rows, 3)
                .into_iter()
                .map(BigInt::from)
                .collect();
            a.left_mul_vec(&c)
        } else {
            random_vector(&mut rng, cols, 6)
                .into_iter()
                .map(BigInt::from)
                .collect()
        };
        let m = subgroup_membership(&a, &v).map_err(|e| e.to_string())?;
        let brute = brute_member(&a, &v, 3);
        let oracle = smith_member(&a, &v);
        if brute {
            ensure(m.member, || {
                format!("trial {trial}: brute force found a combination")
            })?;
        }
        ensure(m.member == oracle, || {
            format!("trial {trial}: Smith oracle disagrees")
        })?;
        if m.member {
            members += 1;
            let c = m
                .coefficients
                .as_ref()
                .ok_or("member without coefficients")?;
            ensure(a.left_mul_vec(c) == v, || {
                format!("trial {trial}: coefficients wrong")
            })?;
        } else {
            non_members += 1;
        }
    }
    ensure(members > 0 && non_members > 0, || {
        format!("{members} members, {non_members} non-members")
    })
}

fn main() {
    let mut suite = Suite {
        failures: Vec::new(),
    };
    let ms = Duration::from_millis;
    suite.run(
        1,
        "sphere arrangement has 6 chambers",
        Some(ms(100)),
        c1_sphere,
    );
    suite.run(
        2,
        "plane arrangement sum and count 18",
        Some(ms(100)),
        c2_plane,
    );
    suite.run(
        3,
        "ζμ = μζ = δ and inversion round trips",
        Some(ms(10_000)),
        c3_mobius,
    );
    suite.run(
        4,
        "orthogonal idempotents, restrict_j, meet products",
        None,
        c4_idempotents,
    );
    suite.run(5, "distributive iff cancellation", None, c5_cancellation);
    suite.run(
        6,
        "u_M(a) ∈ N(L) and Val(L) free on ji",
        Some(ms(30_000)),
        c6_n_membership,
    );
    suite.run(7, "valuation defects vanish", None, c7_valuation_corollary);
    suite.run(8, "set-model dissection oracle", None, c8_set_oracle);
    suite.run(9, "face counts and polynomial identities", None, c9_faces);
    suite.run(
        10,
        "normal forms and subgroup membership",
        None,
        c10_zlinalg,
    );
    if !suite.failures.is_empty() {
        eprintln!("failed criteria: {:?}", suite.failures);
        std::process::exit(1);
    }
}
