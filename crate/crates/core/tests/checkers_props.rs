use num_bigint::BigInt;
use num_rational::BigRational;

use wzeta::checkers::*;
use wzeta::expr::parse_poly;
use wzeta::ff::FqField;
use wzeta::geom::{count_table, CountTable, PatchMap, VarietySpec};
use wzeta::mpoly::IntMPoly;
use wzeta::upoly;

const XYZ: [&str; 3] = ["x", "y", "z"];

fn poly(s: &str, vars: &[&str]) -> IntMPoly {
    parse_poly(s, vars).unwrap()
}

fn proj(f: &FqField, vars: &[&str], eqs: &[&str]) -> VarietySpec {
    VarietySpec::projective(f, vars, eqs.iter().map(|e| poly(e, vars)).collect()).unwrap()
}

fn cfg(r: usize) -> CheckConfig {
    CheckConfig { r, ..Default::default() }
}

fn assert_pass(rep: &CheckReport) {
    assert_eq!(rep.verdict(), Verdict::Pass, "{rep:#?}");
    assert!(rep.inconclusive.is_empty(), "{:?}", rep.inconclusive);
}

#[test]
fn divis_on_shifted_counts() {
    let f3 = FqField::new(3, 1).unwrap();
    let conic = proj(&f3, &XYZ, &["x^2 + y^2 - z^2"]);
    let t = count_table(&conic, 5).unwrap();
    let shifted = CountTable::new(t.q.clone(), t.counts.iter().map(|n| n - 1).collect());
    let rep = check_divis(&shifted, 1, &cfg(4)).unwrap();
    assert_pass(&rep);
    // q^r is divisible by q^r but not by q^{2r}
    let rep = check_divis(&shifted, 2, &cfg(4)).unwrap();
    assert_eq!(rep.verdict(), Verdict::Fail);
}

#[test]
fn ax_katz_examples() {
    let f3 = FqField::new(3, 1).unwrap();
    let line = proj(&f3, &XYZ, &["x + y + z"]);
    let rep = check_ax_katz(&line, &cfg(2)).unwrap();
    assert_pass(&rep);
    assert_eq!(rep.counts[0], BigInt::from(4));
    assert_pass(&check_ax_katz(&proj(&f3, &XYZ, &["x*y - z^2"]), &cfg(3)).unwrap());

    let f2 = FqField::new(2, 1).unwrap();
    let v5 = ["a", "b", "c", "d", "e"];
    let sys = proj(&f2, &v5, &["a^3 + b^2*c + c*d*e + e^3 + a*b*d", "a + b + c + d"]);
    assert_pass(&check_ax_katz(&sys, &cfg(3)).unwrap());

    let cubic = proj(&f3, &XYZ, &["y^2*z - x^3 - x*z^2 - z^3"]);
    assert!(matches!(check_ax_katz(&cubic, &cfg(2)), Err(CheckError::HypothesisViolated(_))));
}

#[test]
fn general_serre_pairs() {
    let f3 = FqField::new(3, 1).unwrap();
    let e1 = proj(&f3, &XYZ, &["y^2*z - x^3 - x^2*z - z^3"]);
    let e2 = proj(&f3, &XYZ, &["y^2*z - x^3 - 2*x^2*z - z^3"]);
    let ss = proj(&f3, &XYZ, &["y^2*z - x^3 + x*z^2 - z^3"]);
    for (a, b) in [(&e1, &e2), (&e1, &e1), (&e1, &ss)] {
        let rep = check_general_serre(a, b, &cfg(3)).unwrap();
        assert_pass(&rep);
        assert!(rep.slopes.iter().all(|s| s.lambda >= BigRational::from_integer(0.into())));
    }
    let f2 = FqField::new(2, 1).unwrap();
    let s2 = proj(&f2, &XYZ, &["y^2*z + y*z^2 + x^3"]);
    let s3 = proj(&f2, &XYZ, &["y^2*z + y*z^2 + x^3 + x*z^2"]);
    assert_pass(&check_general_serre(&s2, &s3, &cfg(3)).unwrap());

    let nodal = proj(&f3, &XYZ, &["y^2*z - x^3 - x^2*z"]);
    assert!(matches!(check_general_serre(&nodal, &e1, &cfg(2)), Err(CheckError::NotSmooth(_))));
}

fn theta(e1: &VarietySpec, e2: &VarietySpec, k1: usize, k2: usize) -> VarietySpec {
    let base = &e1.base;
    let c = wzeta::geom::CountConfig::default();
    let p1 = wzeta::geom::rational_points(e1, 1, &c).unwrap()[k1].clone();
    let p2 = wzeta::geom::rational_points(e2, 1, &c).unwrap()[k2].clone();
    let amb = vec![proj(base, &XYZ, &[]), proj(base, &XYZ, &[])];
    VarietySpec::union(vec![
        VarietySpec::translate_embed(e1.clone(), amb.clone(), 0, vec![vec![], p2]).unwrap(),
        VarietySpec::translate_embed(e2.clone(), amb, 1, vec![p1, vec![]]).unwrap(),
    ])
    .unwrap()
}

#[test]
fn serre_theta_on_translates() {
    let f5 = FqField::new(5, 1).unwrap();
    let e1 = proj(&f5, &XYZ, &["y^2*z - x^3 - x*z^2 - z^3"]);
    let e2 = proj(&f5, &XYZ, &["y^2*z - x^3 - z^3"]);
    let rep = check_serre_theta(&theta(&e1, &e2, 0, 0), &theta(&e1, &e2, 2, 1), true, &cfg(3)).unwrap();
    assert_pass(&rep);
    assert!(rep.residues.iter().all(|r| r.difference == BigInt::from(0)));

    let f3 = FqField::new(3, 1).unwrap();
    let conic = proj(&f3, &XYZ, &["x*y - z^2"]);
    let line = proj(&f3, &XYZ, &["x"]);
    assert!(matches!(check_serre_theta(&conic, &line, false, &cfg(2)), Err(CheckError::HypothesisNotDeclared(_))));
}

#[test]
fn congruence_pairs() {
    let f3 = FqField::new(3, 1).unwrap();
    let p1 = proj(&f3, &["u", "v"], &[]);
    let conic = proj(&f3, &XYZ, &["x*y - z^2"]);
    assert_pass(&check_congruence_pair(&p1, &p1, &cfg(3)).unwrap());
    assert_pass(&check_congruence_pair(&p1, &conic, &cfg(3)).unwrap());
    // P^1 as the line w = 0 in P^2, plus a point off it
    let p1_plus_point = VarietySpec::union(vec![
        proj(&f3, &["u", "v", "w"], &["w"]),
        proj(&f3, &["u", "v", "w"], &["u", "v"]),
    ])
    .unwrap();
    let rep = check_congruence_pair(&p1, &p1_plus_point, &cfg(3)).unwrap();
    assert_eq!(rep.verdict(), Verdict::Fail);
    assert!(rep.residues.iter().all(|r| r.difference == BigInt::from(-1)));
}

/// `y^2 + xy = x^3 + 1` over `base` with translation by `(0, 1)`.
fn igusa_e1(base: &FqField) -> (VarietySpec, PatchMap) {
    let e = proj(base, &XYZ, &["y^2*z + x*y*z + x^3 + z^3"]);
    let tr = PatchMap {
        patches: vec![
            vec![poly("x*z", &XYZ), poly("y*z + x^2 + x*z + z^2", &XYZ), poly("x^2", &XYZ)],
            vec![poly("x", &XYZ), poly("y", &XYZ), poly("y + z", &XYZ)],
        ],
    };
    (e, tr)
}

fn negation_a1() -> PatchMap {
    PatchMap { patches: vec![vec![poly("x", &XYZ), poly("y + x", &XYZ), poly("z", &XYZ)]] }
}

#[test]
fn igusa_counterexample() {
    for a in [1, 2] {
        let base = FqField::new(2, a).unwrap();
        let (e1, translation) = igusa_e1(&base);
        let e2 = proj(&base, &XYZ, &["y^2*z + x*y*z + x^3 + x^2*z + z^3"]);
        let input = IgusaInput { e1, translation, e2, negation: negation_a1() };
        let rep = check_igusa(&input, &cfg(4)).unwrap();
        assert_pass(&rep);
    }
}

#[test]
fn igusa_with_supersingular_e2_does_not_diverge() {
    let base = FqField::new(2, 1).unwrap();
    let (e1, translation) = igusa_e1(&base);
    let e2 = proj(&base, &XYZ, &["y^2*z + y*z^2 + x^3"]);
    let negation = PatchMap { patches: vec![vec![poly("x", &XYZ), poly("y + z", &XYZ), poly("z", &XYZ)]] };
    let rep = check_igusa(&IgusaInput { e1, translation, e2, negation }, &cfg(4)).unwrap();
    assert_eq!(rep.verdict(), Verdict::Fail);
    assert!(rep.cross_checks.iter().all(|c| c.agree));
    assert!(rep.notes.iter().any(|n| n.contains("E2 is supersingular")));
}

#[test]
fn igusa_guards() {
    let f3 = FqField::new(3, 1).unwrap();
    let e = proj(&f3, &XYZ, &["y^2*z - x^3 - x^2*z - z^3"]);
    let id = PatchMap { patches: vec![vec![poly("x", &XYZ), poly("y", &XYZ), poly("z", &XYZ)]] };
    let input = IgusaInput { e1: e.clone(), translation: id.clone(), e2: e, negation: id.clone() };
    assert!(matches!(check_igusa(&input, &cfg(2)), Err(CheckError::WrongCharacteristic { expected: 2, got: 3 })));

    let f2 = FqField::new(2, 1).unwrap();
    let (e1, _) = igusa_e1(&f2);
    let input = IgusaInput { e1: e1.clone(), translation: id, e2: e1, negation: negation_a1() };
    assert!(matches!(check_igusa(&input, &cfg(2)), Err(CheckError::TorsionPointInvalid(_))));
}

#[test]
fn vanishing_purity() {
    let f3 = FqField::new(3, 1).unwrap();
    let p1 = proj(&f3, &["u", "v"], &[]);
    let ends = VarietySpec::union(vec![proj(&f3, &["u", "v"], &["u"]), proj(&f3, &["u", "v"], &["v"])]).unwrap();
    let rep = check_vanish_purity(&p1, &ends, 1, true, &cfg(3)).unwrap();
    assert_pass(&rep);
    assert_eq!(rep.zeta.as_ref().unwrap().num, upoly::from_i64(&[1, -1]));

    let f5 = FqField::new(5, 1).unwrap();
    let e = proj(&f5, &XYZ, &["y^2*z - x^3 - x*z^2 - z^3"]);
    let origin = proj(&f5, &XYZ, &["x", "z"]);
    let rep = check_vanish_purity(&e, &origin, 1, true, &cfg(3)).unwrap();
    assert_pass(&rep);
    // unit root factor only
    assert_eq!(rep.slopes.iter().filter(|s| s.lambda == BigRational::from_integer(0.into())).count(), 1);

    let p2 = proj(&f3, &XYZ, &[]);
    assert_pass(&check_vanish_purity(&p2, &proj(&f3, &XYZ, &["z"]), 2, true, &cfg(3)).unwrap());
    assert_pass(&check_vanish_purity(&p2, &proj(&f3, &XYZ, &["x*y - z^2"]), 2, true, &cfg(3)).unwrap());
    assert!(matches!(
        check_vanish_purity(&p2, &proj(&f3, &XYZ, &["z"]), 2, false, &cfg(3)),
        Err(CheckError::HypothesisNotDeclared(_))
    ));
}
