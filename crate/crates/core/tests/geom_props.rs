use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wzeta::expr::parse_poly;
use wzeta::ff::{FqElem, FqField};
use wzeta::geom::action::{quotient_count_by_orbits, quotient_count_free, twisted_count, GroupAction, PatchMap};
use wzeta::geom::smooth::smoothness_spot_check;
use wzeta::geom::{
    count_points, count_points_flat, count_table, AmbientKind, CountConfig, GeomError, VarietySpec,
};
use wzeta::mpoly::IntMPoly;

const XYZ: [&str; 3] = ["x", "y", "z"];

fn poly(s: &str, vars: &[&str]) -> IntMPoly {
    parse_poly(s, vars).unwrap()
}

fn proj(f: &FqField, vars: &[&str], eqs: &[&str]) -> VarietySpec {
    VarietySpec::projective(f, vars, eqs.iter().map(|e| poly(e, vars)).collect()).unwrap()
}

/// Independent oracle: evaluates with `FqField` at every normalized point.
fn oracle_points(base: &FqField, kind: AmbientKind, vars: &[&str], eqs: &[Vec<&str>], r: u32) -> u64 {
    let ext = base.extension(r).unwrap();
    let gen = ext.embed_generator(base).unwrap();
    let eqs: Vec<Vec<IntMPoly>> = eqs.iter().map(|c| c.iter().map(|e| poly(e, vars)).collect()).collect();
    let elems: Vec<FqElem> = ext.elements().collect();
    let n = vars.len();
    let mut count = 0;
    let mut idx = vec![0usize; n];
    loop {
        let pt: Vec<FqElem> = idx.iter().map(|&i| elems[i]).collect();
        let normalized = match kind {
            AmbientKind::Affine => true,
            AmbientKind::Projective => pt.iter().find(|c| !ext.is_zero(**c)).is_some_and(|c| *c == ext.one()),
        };
        if normalized
            && eqs.iter().any(|comp| comp.iter().all(|f| ext.is_zero(ext.eval_with_gen(f, &pt, gen).unwrap())))
        {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == n {
                return count;
            }
            idx[k] += 1;
            if idx[k] < elems.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[test]
fn projective_plane_cubic_over_f5_matches_oracle_and_hasse() {
    let f5 = FqField::new(5, 1).unwrap();
    let eq = "y^2*z - x^3 - x*z^2 - z^3";
    let e = proj(&f5, &XYZ, &[eq]);
    for r in 1..=2 {
        let n = count_points(&e, r).unwrap();
        let oracle = oracle_points(&f5, AmbientKind::Projective, &XYZ, &[vec![eq]], r);
        assert_eq!(n, BigInt::from(oracle));
        let q = 5f64.powi(r as i32);
        let n = oracle as f64;
        assert!((n - (q + 1.0)).abs() <= 2.0 * q.sqrt());
    }
}

#[test]
fn elliptic_table_is_consistent_with_frobenius_trace() {
    let f3 = FqField::new(3, 1).unwrap();
    let e = proj(&f3, &XYZ, &["y^2*z - x^3 + x*z^2 - z^3"]);
    let t = count_table(&e, 4).unwrap();
    let q = BigInt::from(3);
    let a = &q + 1 - t.get(1);
    // alpha^2 + abar^2 = a^2 - 2q
    assert_eq!(t.get(2), &(&q * &q + 1 - (&a * &a - 2 * &q)));
    let s3 = &a * &a * &a - 3 * &q * &a;
    assert_eq!(t.get(3), &(q.pow(3) + 1 - s3));
}

#[test]
fn generator_symbol_over_f4_matches_oracle() {
    let f4 = FqField::new(2, 2).unwrap();
    let eq = "y^2*z + x*y*z + x^3 + g*z^3";
    let e = proj(&f4, &XYZ, &[eq]);
    for r in 1..=2 {
        let oracle = oracle_points(&f4, AmbientKind::Projective, &XYZ, &[vec![eq]], r);
        assert_eq!(count_points(&e, r).unwrap(), BigInt::from(oracle));
    }
    let a = VarietySpec::affine(&f4, &["x", "y"], vec![poly("x*y + g", &["x", "y"])]).unwrap();
    assert_eq!(count_points(&a, 1).unwrap(), BigInt::from(3));
}

#[test]
fn products_multiply_and_match_flat_enumeration() {
    let f3 = FqField::new(3, 1).unwrap();
    let c = proj(&f3, &XYZ, &["x^2 + y^2 - z^2"]);
    let l = VarietySpec::affine(&f3, &["u"], vec![poly("u^2 - 1", &["u"])]).unwrap();
    let p = VarietySpec::product(vec![c.clone(), l.clone()]).unwrap();
    let cfg = CountConfig::default();
    for r in 1..=2 {
        let n = count_points(&p, r).unwrap();
        assert_eq!(n, count_points(&c, r).unwrap() * count_points(&l, r).unwrap());
        assert_eq!(n, count_points_flat(&p, r, &cfg).unwrap());
    }
}

fn random_form(rng: &mut ChaCha8Rng, p: u64, deg: u32) -> String {
    let mut terms = Vec::new();
    for i in 0..=deg {
        for j in 0..=deg - i {
            let k = deg - i - j;
            let c = rng.gen_range(0..p);
            if c != 0 {
                terms.push(format!("{c}*x^{i}*y^{j}*z^{k}"));
            }
        }
    }
    if terms.is_empty() {
        terms.push(format!("x^{deg}"));
    }
    terms.join(" + ")
}

#[test]
fn unions_match_direct_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in [2u64, 3] {
        let f = FqField::new(p, 1).unwrap();
        for trial in 0..12 {
            let ncomp = 1 + trial % 3;
            let comps: Vec<Vec<String>> = (0..ncomp)
                .map(|_| {
                    let neq = rng.gen_range(1..=2);
                    (0..neq)
                        .map(|_| {
                            let d = rng.gen_range(1..=2);
                            random_form(&mut rng, p, d)
                        })
                        .collect()
                })
                .collect();
            let comp_refs: Vec<Vec<&str>> = comps.iter().map(|c| c.iter().map(|s| s.as_str()).collect()).collect();
            let parts = comp_refs.iter().map(|c| proj(&f, &XYZ, c)).collect();
            let u = VarietySpec::union(parts).unwrap();
            let cfg = CountConfig::default();
            for r in 1..=2 {
                let oracle = oracle_points(&f, AmbientKind::Projective, &XYZ, &comp_refs, r);
                assert_eq!(count_points(&u, r).unwrap(), BigInt::from(oracle), "{comps:?} r={r}");
                assert_eq!(count_points_flat(&u, r, &cfg).unwrap(), BigInt::from(oracle));
            }
        }
    }
}

#[test]
fn count_tables_pass_mobius_checks() {
    let f2 = FqField::new(2, 1).unwrap();
    let p1 = proj(&f2, &["x", "y"], &[]);
    let t = count_table(&p1, 3).unwrap();
    assert_eq!(t.counts, vec![BigInt::from(3), BigInt::from(5), BigInt::from(9)]);
    let pt = VarietySpec::point(&f2);
    assert!(count_table(&pt, 4).unwrap().counts.iter().all(|n| n == &BigInt::from(1)));
    let f4 = FqField::new(2, 2).unwrap();
    let quad = proj(&f4, &XYZ, &["x^2 + g*y*z + x*y", "z^2 + y^2 + x*z"]);
    count_table(&quad, 3).unwrap().check_consistency().unwrap();
}

/// `y^2 + xy = x^3 + 1` over F_2 and translation by its 2-torsion point (0, 1).
fn ordinary_f2() -> (VarietySpec, PatchMap) {
    let f2 = FqField::new(2, 1).unwrap();
    let e = proj(&f2, &XYZ, &["y^2*z + x*y*z + x^3 + z^3"]);
    let tr = PatchMap {
        patches: vec![
            vec![poly("x*z", &XYZ), poly("y*z + x^2 + x*z + z^2", &XYZ), poly("x^2", &XYZ)],
            vec![poly("x", &XYZ), poly("y", &XYZ), poly("y + z", &XYZ)],
        ],
    };
    (e, tr)
}

#[test]
fn translation_twist_equals_plain_count() {
    let (e, tr) = ordinary_f2();
    let act = GroupAction { order: 2, maps: vec![Some(tr)] };
    let cfg = CountConfig::default();
    for r in 1..=4 {
        assert_eq!(twisted_count(&e, &act, r, &cfg).unwrap(), count_points(&e, r).unwrap());
    }
    let id = GroupAction::trivial(1);
    assert_eq!(twisted_count(&e, &id, 3, &cfg).unwrap(), count_points(&e, 3).unwrap());
}

#[test]
fn negation_twist_equals_quadratic_twist() {
    let f5 = FqField::new(5, 1).unwrap();
    let e = proj(&f5, &XYZ, &["y^2*z - x^3 - x*z^2 - z^3"]);
    // 2 is a non-square mod 5
    let et = proj(&f5, &XYZ, &["2*y^2*z - x^3 - x*z^2 - z^3"]);
    let neg = PatchMap { patches: vec![vec![poly("x", &XYZ), poly("-y", &XYZ), poly("z", &XYZ)]] };
    let act = GroupAction { order: 2, maps: vec![Some(neg)] };
    let cfg = CountConfig::default();
    assert_eq!(twisted_count(&e, &act, 1, &cfg).unwrap(), count_points(&et, 1).unwrap());
    for r in 1..=3 {
        let expect = 2 * (BigInt::from(5).pow(r) + 1) - count_points(&e, r).unwrap();
        assert_eq!(twisted_count(&e, &act, r, &cfg).unwrap(), expect);
    }
}

#[test]
fn igusa_quotient_matches_orbit_enumeration() {
    let (e1, tr) = ordinary_f2();
    let f2 = e1.base.clone();
    let e2 = proj(&f2, &XYZ, &["y^2*z + y*z^2 + x^3"]);
    let neg = PatchMap { patches: vec![vec![poly("x", &XYZ), poly("y + z", &XYZ), poly("z", &XYZ)]] };
    let x = VarietySpec::product(vec![e1.clone(), e2.clone()]).unwrap();
    let act = GroupAction { order: 2, maps: vec![Some(tr), Some(neg)] };
    let cfg = CountConfig::default();
    for r in 1..=2 {
        let q = quotient_count_free(&x, &act, r, &cfg).unwrap();
        assert_eq!(q, quotient_count_by_orbits(&x, &act, r, &cfg).unwrap());
    }
    // the twisted count splits over the factors
    let n1 = count_points(&e1, 1).unwrap();
    let n2 = count_points(&e2, 1).unwrap();
    let t2 = BigInt::from(2 * 3) - &n2;
    assert_eq!(quotient_count_free(&x, &act, 1, &cfg).unwrap(), (&n1 * &n2 + &n1 * &t2) / 2);
}

#[test]
fn non_free_actions_are_rejected() {
    let f5 = FqField::new(5, 1).unwrap();
    let e = proj(&f5, &XYZ, &["y^2*z - x^3 - x*z^2 - z^3"]);
    let neg = PatchMap { patches: vec![vec![poly("x", &XYZ), poly("-y", &XYZ), poly("z", &XYZ)]] };
    let act = GroupAction { order: 2, maps: vec![Some(neg)] };
    assert!(matches!(
        quotient_count_free(&e, &act, 1, &CountConfig::default()),
        Err(GeomError::ActionNotFree)
    ));
}

#[test]
fn smoothness_examples() {
    let cfg = CountConfig::default();
    let f3 = FqField::new(3, 1).unwrap();
    assert!(smoothness_spot_check(&proj(&f3, &XYZ, &["x^2 + y^2 - z^2"]), 1, &cfg).unwrap());
    let f5 = FqField::new(5, 1).unwrap();
    assert!(!smoothness_spot_check(&proj(&f5, &XYZ, &["y^2*z - x^3 - x^2*z"]), 1, &cfg).unwrap());
    assert!(smoothness_spot_check(&proj(&f5, &XYZ, &["y^2*z - x^3 - x*z^2 - z^3"]), 2, &cfg).unwrap());
    let empty = VarietySpec::affine(&f3, &["x"], vec![poly("x^2 + 1", &["x"])]).unwrap();
    assert!(smoothness_spot_check(&empty, 1, &cfg).unwrap());
}

#[test]
fn degenerate_inputs() {
    let f3 = FqField::new(3, 1).unwrap();
    let a2 = VarietySpec::affine(&f3, &["x", "y"], vec![]).unwrap();
    assert_eq!(count_points(&a2, 1).unwrap(), BigInt::from(9));
    assert_eq!(count_points(&proj(&f3, &XYZ, &[]), 1).unwrap(), BigInt::from(13));
    let contradiction = VarietySpec::affine(&f3, &["x"], vec![poly("x", &["x"]), poly("x - 1", &["x"])]).unwrap();
    assert_eq!(count_points(&contradiction, 1).unwrap(), BigInt::from(0));
    assert!(matches!(
        VarietySpec::projective(&f3, &XYZ, vec![poly("x^2 + y", &XYZ)]),
        Err(GeomError::NonHomogeneous { index: 0 })
    ));
}
