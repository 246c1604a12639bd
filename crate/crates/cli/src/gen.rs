//! Manifest generator for Weierstrass curves
//! `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`, including translation
//! by a rational 2-torsion point and negation as patch maps.

use std::fmt::Write;

use wzeta::ff::{FqElem, FqField};
use wzeta::geom::elem_to_poly;
use wzeta::mpoly::{IntMPoly, GEN_SYMBOL};

/// Integer Weierstrass coefficients `[a1, a2, a3, a4, a6]`.
pub type Weierstrass = [i64; 5];

fn vars() -> Vec<String> {
    ["x", "y", "z", GEN_SYMBOL].iter().map(|s| s.to_string()).collect()
}

/// The homogeneous equation, with coefficients reduced to `[0, p)`.
pub fn curve_equation(p: u32, c: &Weierstrass) -> IntMPoly {
    let v = vars();
    let (x, y, z) = (IntMPoly::var(&v, 0), IntMPoly::var(&v, 1), IntMPoly::var(&v, 2));
    let k = |n: i64| IntMPoly::constant(&v, n);
    let [a1, a2, a3, a4, a6] = *c;
    let lhs = y.pow(2).mul(&z).add(&k(a1).mul(&x).mul(&y).mul(&z)).add(&k(a3).mul(&y).mul(&z.pow(2)));
    let rhs = x
        .pow(3)
        .add(&k(a2).mul(&x.pow(2)).mul(&z))
        .add(&k(a4).mul(&x).mul(&z.pow(2)))
        .add(&k(a6).mul(&z.pow(3)));
    lhs.sub(&rhs).reduce_mod(&p.into())
}

fn on_curve(f: &FqField, c: &Weierstrass, x: FqElem, y: FqElem) -> bool {
    let k = |n: i64| f.from_int(n);
    let [a1, a2, a3, a4, a6] = *c;
    let lhs = f.add(f.add(f.mul(y, y), f.mul(k(a1), f.mul(x, y))), f.mul(k(a3), y));
    let x2 = f.mul(x, x);
    let rhs = f.add(f.add(f.add(f.mul(x2, x), f.mul(k(a2), x2)), f.mul(k(a4), x)), k(a6));
    lhs == rhs
}

/// Affine rational points `T` with `T = -T`, in element order.
pub fn two_torsion(f: &FqField, c: &Weierstrass) -> Vec<(FqElem, FqElem)> {
    let [a1, _, a3, _, _] = *c;
    let mut out = Vec::new();
    for x in f.elements() {
        for y in f.elements() {
            let neg_y = f.sub(f.sub(f.neg(y), f.mul(f.from_int(a1), x)), f.from_int(a3));
            if on_curve(f, c, x, y) && neg_y == y {
                out.push((x, y));
            }
        }
    }
    out
}

/// Patches for `P -> P + T` with `T = (x0, y0)` of order 2: the chord
/// formula away from `{O, T}`, then `O -> T`, then `T -> O`.
pub fn translation_patches(f: &FqField, c: &Weierstrass, t: (FqElem, FqElem)) -> Vec<Vec<IntMPoly>> {
    let v = vars();
    let (x, y, z) = (IntMPoly::var(&v, 0), IntMPoly::var(&v, 1), IntMPoly::var(&v, 2));
    let k = |n: i64| IntMPoly::constant(&v, n);
    let [a1, a2, a3, _, _] = *c;
    let x0 = elem_to_poly(f, t.0, &v);
    let y0 = elem_to_poly(f, t.1, &v);
    let u = y.sub(&y0.mul(&z));
    let w = x.sub(&x0.mul(&z));
    let w2 = w.pow(2);
    let nx = u
        .pow(2)
        .mul(&z)
        .add(&k(a1).mul(&u).mul(&w).mul(&z))
        .sub(&k(a2).add(&x0).mul(&w2).mul(&z))
        .sub(&x.mul(&w2));
    let ny = u
        .mul(&x0)
        .mul(&w2)
        .mul(&z)
        .sub(&u.mul(&nx))
        .sub(&k(a1).mul(&nx).mul(&w))
        .sub(&y0.add(&k(a3)).mul(&w.pow(3)).mul(&z));
    let pm = f.p().into();
    let chord = vec![nx.mul(&w), ny, w.pow(3).mul(&z)];
    let to_t = vec![x0.mul(&u), y0.mul(&u), u.clone()];
    let to_o = vec![k(0), z.clone(), k(0)];
    [chord, to_t, to_o].into_iter().map(|p| p.into_iter().map(|e| e.reduce_mod(&pm)).collect()).collect()
}

/// `(x, y) -> (x, -y - a1 x - a3)`.
pub fn negation_patches(p: u32, c: &Weierstrass) -> Vec<Vec<IntMPoly>> {
    let v = vars();
    let (x, y, z) = (IntMPoly::var(&v, 0), IntMPoly::var(&v, 1), IntMPoly::var(&v, 2));
    let k = |n: i64| IntMPoly::constant(&v, n);
    let ny = y.neg().sub(&k(c[0]).mul(&x)).sub(&k(c[2]).mul(&z));
    vec![vec![x, ny.reduce_mod(&p.into()), z]]
}

fn patches_text(patches: &[Vec<IntMPoly>]) -> String {
    patches.iter().map(|p| p.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")).collect::<Vec<_>>().join("; ")
}

fn curve_block(out: &mut String, name: &str, p: u32, c: &Weierstrass) {
    let [a1, a2, a3, a4, a6] = c;
    writeln!(out, "# y^2 + {a1}xy + {a3}y = x^3 + {a2}x^2 + {a4}x + {a6}").unwrap();
    writeln!(out, "[variety {name}]\nkind = projective\nvars = x, y, z\neq = {}\n", curve_equation(p, c)).unwrap();
}

/// A manifest for one curve (`main`, with translation by its first rational
/// 2-torsion point when there is one), or for the pair `E1 x E2` with the
/// action `(P, Q) -> (P + T, -Q)` when `e2` is given.
pub fn weierstrass_manifest(p: u32, a: u32, e1: &Weierstrass, e2: Option<&Weierstrass>) -> Result<String, String> {
    let f = FqField::new(p as u64, a).map_err(|e| e.to_string())?;
    let mut out = String::new();
    writeln!(out, "[field]\np = {p}\na = {a}\n").unwrap();
    let torsion = two_torsion(&f, e1);
    match e2 {
        None => {
            curve_block(&mut out, "main", p, e1);
            if let Some(&t) = torsion.first() {
                writeln!(out, "# translation by ({}, {})", f.format(t.0), f.format(t.1)).unwrap();
                writeln!(out, "[action]\nvariety = main\norder = 2\nfree = true").unwrap();
                writeln!(out, "map.main = {}", patches_text(&translation_patches(&f, e1, t))).unwrap();
            }
        }
        Some(e2) => {
            let &t = torsion.first().ok_or("E1 has no rational point of order 2")?;
            curve_block(&mut out, "E1", p, e1);
            curve_block(&mut out, "E2", p, e2);
            writeln!(out, "[variety X]\nkind = product\nparts = E1, E2\n").unwrap();
            writeln!(out, "# translation by ({}, {}) on E1, negation on E2", f.format(t.0), f.format(t.1)).unwrap();
            writeln!(out, "[action]\nvariety = X\norder = 2\nfree = true").unwrap();
            writeln!(out, "map.E1 = {}", patches_text(&translation_patches(&f, e1, t))).unwrap();
            writeln!(out, "map.E2 = {}", patches_text(&negation_patches(p, e2))).unwrap();
        }
    }
    Ok(out)
}
