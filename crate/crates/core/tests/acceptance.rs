//! End-to-end acceptance checks. Runs without the libtest harness and prints
//! one PASS/FAIL line per criterion; exits non-zero if any criterion fails.
//!
//! The oracles here (vertex enumeration, point thresholds, integer grids,
//! polygon centroids, LP certificates) are written against the raw
//! definitions and share no code with the library beyond the `Rat` type.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use toralpha_core::catalog;
use toralpha_core::divisor::ToricDivisor;
use toralpha_core::exact::{IntMatrix, Rat};
use toralpha_core::fan::Fan;
use toralpha_core::invariant::{
    alpha_fano, glb_ricci, lct_anticanonical_point, w_point, LctValue, NefBigDivisor, NewtonBody,
};
use toralpha_core::lp::{LinearProgram, LpSolution, Relation};
use toralpha_core::polytope::{RationalPolytope, VPolytope};
use toralpha_core::symmetry::SymmetryGroup;

type Check = Result<(), String>;
type Pt = Vec<Rat>;
type Criterion<'a> = (&'a str, Box<dyn FnOnce(&mut StdRng) -> Check>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn ri(n: i64) -> Rat {
    Rat::from(n)
}

fn pt(v: &[(i64, i64)]) -> Pt {
    v.iter().map(|&(n, d)| r(n, d)).collect()
}

fn show(p: &[Rat]) -> String {
    let s: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", s.join(","))
}

// ---------------------------------------------------------------------------
// independent oracles

fn int_rays(fan: &Fan) -> Vec<Vec<i64>> {
    fan.rays()
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect())
        .collect()
}

fn dot_i(u: &[i64], m: &[Rat]) -> Rat {
    u.iter().zip(m).map(|(&a, x)| &ri(a) * x).sum()
}

/// Gaussian elimination on a square system; `None` when singular.
fn solve_square(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = &a[i][col] / &a[col][col];
                let pivot_row = a[col].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot_row).skip(col) {
                    *x = &*x - &(&f * p);
                }
                let t = &f * &b[col];
                b[i] = &b[i] - &t;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Vertices of `{m : ⟨m, nᵢ⟩ ≥ bᵢ}` by brute force.
fn h_vertices(normals: &[Vec<i64>], offsets: &[Rat]) -> Vec<Pt> {
    let n = normals[0].len();
    let mut out = BTreeSet::new();
    for s in subsets(normals.len(), n) {
        let a = s.iter().map(|&i| normals[i].iter().map(|&x| ri(x)).collect()).collect();
        let b = s.iter().map(|&i| offsets[i].clone()).collect();
        if let Some(x) = solve_square(a, b) {
            if normals.iter().zip(offsets).all(|(u, o)| dot_i(u, &x) >= *o) {
                out.insert(x);
            }
        }
    }
    out.into_iter().collect()
}

/// Vertices of `{m : ⟨m, uᵨ⟩ ≥ -aᵨ}`.
fn divisor_vertices(rays: &[Vec<i64>], a: &[i64]) -> Vec<Pt> {
    let offsets: Vec<Rat> = a.iter().map(|&x| ri(-x)).collect();
    h_vertices(rays, &offsets)
}

/// `1 / max_{v,ρ} ⟨p - v, uᵨ⟩`, `None` for `+∞`.
fn oracle_lct(rays: &[Vec<i64>], vertices: &[Pt], p: &[Rat]) -> Option<Rat> {
    let mut best: Option<Rat> = None;
    for v in vertices {
        let d: Pt = p.iter().zip(v).map(|(a, b)| a - b).collect();
        for u in rays {
            let x = dot_i(u, &d);
            if best.as_ref().is_none_or(|b| x > *b) {
                best = Some(x);
            }
        }
    }
    let m = best.unwrap();
    m.is_positive().then(|| m.recip())
}

fn lct_of(v: &LctValue) -> Option<Rat> {
    v.value().cloned()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm_upto(d: i64) -> i64 {
    (1..=d).fold(1, |acc, x| acc / gcd(acc, x) * x)
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

struct GridResult {
    points: usize,
    min: Rat,
    argmin: Vec<Pt>,
}

/// Minimum of the point threshold over `{m ∈ P : gᵀm = m ∀g}` restricted to
/// coordinates with denominators at most `max_den`, in exact integer
/// arithmetic over the common denominator `lcm(1..max_den)`.
fn integer_grid(
    rays: &[Vec<i64>],
    a: &[i64],
    group: &[Vec<Vec<i64>>],
    max_den: i64,
) -> GridResult {
    let n = rays[0].len();
    let l = lcm_upto(max_den);
    let verts = divisor_vertices(rays, a);
    let mut axes: Vec<Vec<i64>> = Vec::new();
    for j in 0..n {
        let lo = verts.iter().map(|v| &v[j] * &ri(l)).min().unwrap();
        let hi = verts.iter().map(|v| &v[j] * &ri(l)).max().unwrap();
        let lo = floor_div(lo.numer().to_i64().unwrap(), lo.denom().to_i64().unwrap());
        let hi = floor_div(hi.numer().to_i64().unwrap(), hi.denom().to_i64().unwrap()) + 1;
        axes.push((lo..=hi).filter(|&k| l / gcd(k, l) <= max_den).collect());
    }
    let mut count = 0;
    let mut best: Option<(i64, Vec<Vec<i64>>)> = None;
    let mut idx = vec![0usize; n];
    let mut k = vec![0i64; n];
    'outer: loop {
        for j in 0..n {
            k[j] = axes[j][idx[j]];
        }
        let inside = rays
            .iter()
            .zip(a)
            .all(|(u, &ar)| u.iter().zip(&k).map(|(x, y)| x * y).sum::<i64>() >= -ar * l);
        let fixed = group.iter().all(|g| {
            (0..n).all(|c| (0..n).map(|i| g[i][c] * k[i]).sum::<i64>() == k[c])
        });
        if inside && fixed {
            count += 1;
            let inv = rays
                .iter()
                .zip(a)
                .map(|(u, &ar)| u.iter().zip(&k).map(|(x, y)| x * y).sum::<i64>() + ar * l)
                .max()
                .unwrap();
            // threshold l / inv; smaller threshold means larger inv
            match &mut best {
                Some((b, arg)) if inv == *b => arg.push(k.clone()),
                Some((b, _)) if inv < *b => {}
                _ => best = Some((inv, vec![k.clone()])),
            }
        }
        let mut j = 0;
        loop {
            if j == n {
                break 'outer;
            }
            idx[j] += 1;
            if idx[j] < axes[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
    let (inv, arg) = best.expect("grid meets the fixed polytope");
    assert!(inv > 0, "finite thresholds on a big divisor");
    let mut argmin: Vec<Pt> = arg
        .into_iter()
        .map(|k| k.into_iter().map(|x| r(x, l)).collect())
        .collect();
    argmin.sort();
    GridResult {
        points: count,
        min: r(l, inv),
        argmin,
    }
}

fn group_mats(g: &SymmetryGroup) -> Vec<Vec<Vec<i64>>> {
    g.elements().iter().map(|e| mat_i64(e.matrix())).collect()
}

fn mat_i64(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(|x| x.to_i64().unwrap()).collect())
        .collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn swap(fan: &Fan) -> SymmetryGroup {
    let m = IntMatrix::from_rows(&[vec![BigInt::from(0), BigInt::from(1)], vec![BigInt::from(1), BigInt::from(0)]], 2);
    SymmetryGroup::from_generators(fan, &[m]).unwrap()
}

fn random_combination(rng: &mut StdRng, points: &[Pt]) -> Pt {
    let w: Vec<i64> = (0..points.len()).map(|_| rng.gen_range(0..8)).collect();
    let w = if w.iter().all(|&x| x == 0) { vec![1; points.len()] } else { w };
    let total: i64 = w.iter().sum();
    (0..points[0].len())
        .map(|j| points.iter().zip(&w).map(|(p, &x)| &p[j] * &ri(x)).sum::<Rat>() / ri(total))
        .collect()
}

fn kl_family() -> [(i64, i64); 6] {
    [(1, 2), (1, 3), (2, 3), (2, 5), (3, 4), (3, 7)]
}

fn pkl(k: i64, l: i64) -> Vec<i64> {
    vec![0, -k, 0, l]
}

fn ones(fan: &Fan) -> Vec<i64> {
    vec![1; fan.rays().len()]
}

/// Subgroups checked per fan: all of them when `|W| ≤ 8`, otherwise the
/// trivial group, the cyclic subgroups and `W`.
fn test_subgroups(fan: &Fan) -> Vec<SymmetryGroup> {
    let w = SymmetryGroup::automorphism_group(fan).unwrap();
    if w.order() <= 8 {
        return w.subgroups();
    }
    let mut out = vec![SymmetryGroup::trivial(fan)];
    let mut seen = BTreeSet::new();
    for g in w.elements() {
        let c = SymmetryGroup::from_generators(fan, &[g.matrix().clone()]).unwrap();
        let key: Vec<Vec<Vec<i64>>> = group_mats(&c);
        if seen.insert(key) {
            out.push(c);
        }
    }
    out.push(w);
    out
}

// ---------------------------------------------------------------------------
// criteria

fn c1_family() -> Check {
    let b = catalog::blowup_p2();
    let rays = int_rays(&b);
    let g = swap(&b);
    for (k, l) in kl_family() {
        let d = NefBigDivisor::new(ToricDivisor::from_i64(&b, &pkl(k, l)).unwrap()).unwrap();
        let res = d.alpha(&g).map_err(|e| e.to_string())?;
        let expected = std::cmp::min(r(1, l - k), r(2, l));
        ensure!(res.alpha == expected, "P({k},{l}): alpha {} but expected {expected}", res.alpha);
        // diagonal segment of P(k,l): t·(1,1) with t·(u₁+u₂) ≥ -a
        let a = pkl(k, l);
        let (mut lo, mut hi): (Option<Rat>, Option<Rat>) = (None, None);
        for (u, &ar) in rays.iter().zip(&a) {
            let s = u[0] + u[1];
            if s == 0 {
                continue;
            }
            let bound = r(-ar, s);
            if s > 0 {
                lo = Some(lo.map_or(bound.clone(), |x| std::cmp::max(x, bound)));
            } else {
                hi = Some(hi.map_or(bound.clone(), |x| std::cmp::min(x, bound)));
            }
        }
        let verts = divisor_vertices(&rays, &a);
        let ends = [lo.unwrap(), hi.unwrap()];
        let oracle = ends
            .iter()
            .filter_map(|t| oracle_lct(&rays, &verts, &[t.clone(), t.clone()]))
            .min()
            .unwrap();
        ensure!(oracle == expected, "P({k},{l}): endpoint oracle {oracle}");
    }
    Ok(())
}

fn c2_anticanonical_blowup() -> Check {
    let b = catalog::blowup_p2();
    let rays = int_rays(&b);
    let p13_vertices = [pt(&[(0, 1), (1, 1)]), pt(&[(0, 1), (3, 1)]), pt(&[(1, 1), (0, 1)]), pt(&[(3, 1), (0, 1)])];
    let mut expected: Vec<Pt> = p13_vertices
        .iter()
        .map(|v| v.iter().map(|x| x - &ri(1)).collect())
        .collect();
    expected.sort();
    let k = ToricDivisor::anticanonical(&b);
    let q = k.polytope();
    let got = q.vertices().map_err(|e| e.to_string())?.to_vec();
    ensure!(got == expected, "Q vertices {:?}", got.iter().map(|p| show(p)).collect::<Vec<_>>());
    ensure!(divisor_vertices(&rays, &pkl(1, 3)) == p13_vertices.to_vec(), "P(1,3) oracle vertices");
    ensure!(divisor_vertices(&rays, &ones(&b)) == expected, "Q oracle vertices");

    let g = swap(&b);
    let kd = NefBigDivisor::new(k.clone()).unwrap();
    let alpha_k = kd.alpha(&g).map_err(|e| e.to_string())?;
    ensure!(alpha_k.alpha == r(1, 2), "alpha(-K, swap) = {}", alpha_k.alpha);

    let p = ToricDivisor::from_i64(&b, &pkl(1, 3)).unwrap();
    let shifted = p.shifted(&[BigInt::from(1), BigInt::from(1)]);
    ensure!(shifted.coefficients() == k.coefficients(), "P(1,3) shifted by (1,1) is not -K");
    let alpha_p = NefBigDivisor::new(p.clone()).unwrap().alpha(&g).map_err(|e| e.to_string())?;
    ensure!(alpha_p.alpha == alpha_k.alpha, "alpha differs between P(1,3) and -K");
    let moved: Pt = alpha_p.minimizing_point.iter().map(|x| x - &ri(1)).collect();
    ensure!(moved == alpha_k.minimizing_point, "minimizers not related by the shift");
    for t in -3..=3 {
        let e = k.shifted(&[BigInt::from(t), BigInt::from(t)]);
        let ae = NefBigDivisor::new(e).unwrap().alpha(&g).map_err(|e| e.to_string())?;
        ensure!(ae.alpha == r(1, 2), "alpha of -K shifted by ({t},{t}) is {}", ae.alpha);
    }
    Ok(())
}

fn c3_origin() -> Check {
    for (name, fan) in catalog::all() {
        let d = NefBigDivisor::new(ToricDivisor::anticanonical(&fan)).unwrap();
        let zero = vec![Rat::zero(); fan.dimension()];
        let v = d.lct_point(&zero).map_err(|e| e.to_string())?;
        ensure!(lct_of(&v) == Some(ri(1)), "{name}: lct at origin {v}");
        let rays = int_rays(&fan);
        let verts = divisor_vertices(&rays, &ones(&fan));
        ensure!(oracle_lct(&rays, &verts, &zero) == Some(ri(1)), "{name}: oracle at origin");
    }
    Ok(())
}

fn c4_fano_consistency() -> Check {
    let mut checked = 0;
    for (name, fan) in catalog::all() {
        let d = NefBigDivisor::new(ToricDivisor::anticanonical(&fan)).unwrap();
        for h in test_subgroups(&fan) {
            let general = d.alpha(&h).map_err(|e| format!("{name}: {e}"))?;
            let fano = alpha_fano(&fan, &h).map_err(|e| format!("{name}: {e}"))?;
            ensure!(fano == general.alpha, "{name}, |H|={}: {fano} vs {}", h.order(), general.alpha);
            checked += 1;
        }
        if name != "Bl1P2" {
            let w = SymmetryGroup::automorphism_group(&fan).unwrap();
            let full = alpha_fano(&fan, &w).map_err(|e| e.to_string())?;
            ensure!(full == ri(1), "{name}: alpha with the full group is {full}");
        }
    }
    ensure!(checked >= 2 + 6 + 10 + 2 + 2, "only {checked} subgroup cases");

    let p2 = catalog::projective_plane();
    let d = NefBigDivisor::new(ToricDivisor::anticanonical(&p2)).unwrap();
    let trivial = SymmetryGroup::trivial(&p2);
    let a = d.alpha(&trivial).map_err(|e| e.to_string())?;
    ensure!(a.alpha == r(1, 3), "P2 trivial alpha {}", a.alpha);
    let grid = integer_grid(&int_rays(&p2), &[1, 1, 1], &[], 12);
    ensure!(grid.min == r(1, 3), "P2 grid minimum {}", grid.min);
    let corners = vec![pt(&[(-1, 1), (-1, 1)]), pt(&[(-1, 1), (2, 1)]), pt(&[(2, 1), (-1, 1)])];
    ensure!(
        grid.argmin == corners,
        "P2 grid minimizers {:?}",
        grid.argmin.iter().map(|p| show(p)).collect::<Vec<_>>()
    );
    Ok(())
}

fn c5_antipodal(rng: &mut StdRng) -> Check {
    for (name, fan) in catalog::all() {
        let rays = int_rays(&fan);
        let verts = divisor_vertices(&rays, &ones(&fan));
        let d = NefBigDivisor::new(ToricDivisor::anticanonical(&fan)).unwrap();
        for _ in 0..100 {
            let rho = rng.gen_range(0..rays.len());
            let facet: Vec<Pt> = verts.iter().filter(|v| dot_i(&rays[rho], v) == ri(-1)).cloned().collect();
            let p = random_combination(rng, &facet);
            ensure!(dot_i(&rays[rho], &p) == ri(-1), "{name}: sample left the facet");
            let by_ratio = lct_anticanonical_point(&fan, &p).map_err(|e| format!("{name} {}: {e}", show(&p)))?;
            let general = d.lct_point(&p).map_err(|e| e.to_string())?;
            ensure!(lct_of(&by_ratio) == lct_of(&general), "{name} {}: {by_ratio} vs {general}", show(&p));
            let t = rays.iter().map(|u| dot_i(u, &p)).filter(Rat::is_positive).max().unwrap();
            let s = t.recip();
            let ratio = &s / &(&s + &ri(1));
            ensure!(lct_of(&general) == Some(ratio.clone()), "{name} {}: ratio {ratio}", show(&p));
            let w: Pt = p.iter().map(|x| -(&s * x)).collect();
            ensure!(w_point(&fan, &p).map_err(|e| e.to_string())? == w, "{name}: w_p mismatch");
            let slacks: Vec<Rat> = rays.iter().map(|u| &dot_i(u, &w) + &ri(1)).collect();
            ensure!(slacks.iter().all(|x| !x.is_negative()), "{name}: w_p outside Q");
            ensure!(slacks.iter().any(Rat::is_zero), "{name}: w_p not on the boundary");
            ensure!(oracle_lct(&rays, &verts, &p) == Some(ratio), "{name}: oracle disagrees");
        }
    }
    Ok(())
}

fn sandwich_point(d: &NefBigDivisor, rays: &[Vec<i64>], verts: &[Pt], p: &[Rat], c_star: &Rat) -> Check {
    let below = c_star * &r(999, 1000);
    let above = c_star * &r(1001, 1000);
    let raw = |c: &Rat| {
        verts.iter().all(|v| {
            let x: Pt = v.iter().zip(p).map(|(a, b)| c * &(a - b)).collect();
            rays.iter().all(|u| dot_i(u, &x) > ri(-1))
        })
    };
    ensure!(d.point_containment(&below, p) && raw(&below), "containment fails below {c_star} at {}", show(p));
    ensure!(!d.point_containment(&above, p) && !raw(&above), "containment holds above {c_star} at {}", show(p));
    Ok(())
}

fn c6_sandwich(rng: &mut StdRng) -> Check {
    let mut finite = 0;
    let mut cases: Vec<(String, Fan, Vec<i64>)> = catalog::all()
        .into_iter()
        .map(|(n, f)| {
            let a = ones(&f);
            (n.to_string(), f, a)
        })
        .collect();
    for (k, l) in kl_family() {
        cases.push((format!("P({k},{l})"), catalog::blowup_p2(), pkl(k, l)));
    }
    for (name, fan, a) in &cases {
        let rays = int_rays(fan);
        let verts = divisor_vertices(&rays, a);
        let d = NefBigDivisor::new(ToricDivisor::from_i64(fan, a).unwrap()).unwrap();
        let mut points: Vec<Pt> = verts.clone();
        for _ in 0..20 {
            points.push(random_combination(rng, &verts));
        }
        for p in &points {
            let v = d.lct_point(p).map_err(|e| format!("{name}: {e}"))?;
            if let Some(c) = lct_of(&v) {
                sandwich_point(&d, &rays, &verts, p, &c).map_err(|e| format!("{name}: {e}"))?;
                finite += 1;
            }
        }
        for _ in 0..5 {
            let k = rng.gen_range(2..4);
            let pts: Vec<Pt> = (0..k).map(|_| random_combination(rng, &verts)).collect();
            let body = NewtonBody::new(pts).unwrap();
            let v = d.lct_newton_body(&body).map_err(|e| format!("{name}: {e}"))?;
            if let Some(c) = lct_of(&v) {
                let below = &c * &r(999, 1000);
                let above = &c * &r(1001, 1000);
                ensure!(d.body_containment(&below, &body).map_err(|e| e.to_string())?, "{name}: body containment fails below {c}");
                ensure!(!d.body_containment(&above, &body).map_err(|e| e.to_string())?, "{name}: body containment holds above {c}");
                finite += 1;
            }
        }
    }
    ensure!(finite > 100, "only {finite} finite values exercised");
    Ok(())
}

fn c7_newton_bodies(rng: &mut StdRng) -> Check {
    let b = catalog::blowup_p2();
    let k = NefBigDivisor::new(ToricDivisor::anticanonical(&b)).unwrap();
    let edge = NewtonBody::new(vec![pt(&[(-1, 1), (0, 1)]), pt(&[(0, 1), (-1, 1)])]).unwrap();
    let v = k.lct_newton_body(&edge).map_err(|e| e.to_string())?;
    ensure!(lct_of(&v) == Some(r(1, 2)), "edge body {v}");

    let all: Vec<(String, Fan, Vec<i64>)> = vec![
        ("Bl1P2 -K".into(), catalog::blowup_p2(), vec![1, 1, 1, 1]),
        ("P(1,3)".into(), catalog::blowup_p2(), pkl(1, 3)),
        ("P(2,5)".into(), catalog::blowup_p2(), pkl(2, 5)),
        ("P2 -K".into(), catalog::projective_plane(), vec![1, 1, 1]),
        ("P1xP1 -K".into(), catalog::p1_x_p1(), vec![1, 1, 1, 1]),
    ];
    for i in 0..100 {
        let (name, fan, a) = &all[i % all.len()];
        let rays = int_rays(fan);
        let verts = divisor_vertices(&rays, a);
        let d = NefBigDivisor::new(ToricDivisor::from_i64(fan, a).unwrap()).unwrap();
        let p = random_combination(rng, &verts);
        let body = d.lct_newton_body(&NewtonBody::singleton(p.clone())).map_err(|e| e.to_string())?;
        let point = d.lct_point(&p).map_err(|e| e.to_string())?;
        ensure!(lct_of(&body) == lct_of(&point), "{name} {}: body {body} vs point {point}", show(&p));
        ensure!(lct_of(&point) == oracle_lct(&rays, &verts, &p), "{name} {}: oracle", show(&p));
    }
    for (name, fan, a) in &all {
        let verts = divisor_vertices(&int_rays(fan), a);
        let d = NefBigDivisor::new(ToricDivisor::from_i64(fan, a).unwrap()).unwrap();
        let v = d.lct_newton_body(&NewtonBody::new(verts).unwrap()).map_err(|e| e.to_string())?;
        ensure!(v.is_infinite(), "{name}: full polytope body gives {v}");
    }
    for i in 0..50 {
        let (name, fan, a) = &all[i % all.len()];
        let verts = divisor_vertices(&int_rays(fan), a);
        let d = NefBigDivisor::new(ToricDivisor::from_i64(fan, a).unwrap()).unwrap();
        let inner: Vec<Pt> = (0..rng.gen_range(1..4)).map(|_| random_combination(rng, &verts)).collect();
        let mut outer = inner.clone();
        for _ in 0..rng.gen_range(1..3) {
            outer.push(random_combination(rng, &verts));
        }
        let small = d.lct_newton_body(&NewtonBody::new(inner).unwrap()).map_err(|e| e.to_string())?;
        let large = d.lct_newton_body(&NewtonBody::new(outer).unwrap()).map_err(|e| e.to_string())?;
        let ok = match (lct_of(&small), lct_of(&large)) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(s), Some(l)) => s <= l,
        };
        ensure!(ok, "{name}: smaller body {small} exceeds larger {large}");
    }
    Ok(())
}

/// Centroid of a convex polygon from its vertex set by the shoelace formula.
fn polygon_centroid(vertices: &[Pt]) -> (Rat, Pt) {
    let n = vertices.len();
    let cx: Rat = vertices.iter().map(|v| v[0].clone()).sum::<Rat>() / ri(n as i64);
    let cy: Rat = vertices.iter().map(|v| v[1].clone()).sum::<Rat>() / ri(n as i64);
    let mut order: Vec<&Pt> = vertices.iter().collect();
    // sort counter-clockwise around the vertex mean by half-plane then cross product
    let half = |p: &Pt| {
        let (x, y) = (&p[0] - &cx, &p[1] - &cy);
        !(y.is_positive() || (y.is_zero() && x.is_positive()))
    };
    order.sort_by(|p, q| {
        half(p).cmp(&half(q)).then_with(|| {
            let cross = &(&(&p[0] - &cx) * &(&q[1] - &cy)) - &(&(&p[1] - &cy) * &(&q[0] - &cx));
            Rat::zero().cmp(&cross)
        })
    });
    let mut area2 = Rat::zero();
    let mut gx = Rat::zero();
    let mut gy = Rat::zero();
    for i in 0..n {
        let (p, q) = (order[i], order[(i + 1) % n]);
        let cross = &(&p[0] * &q[1]) - &(&q[0] * &p[1]);
        gx += &(&p[0] + &q[0]) * &cross;
        gy += &(&p[1] + &q[1]) * &cross;
        area2 += cross;
    }
    let area = &area2 / &ri(2);
    let six = &area * &ri(6);
    (area.abs(), vec![&gx / &six, &gy / &six])
}

fn c8_ricci() -> Check {
    let b = catalog::blowup_p2();
    let value = glb_ricci(&b).map_err(|e| e.to_string())?;
    ensure!(value == r(6, 7), "blow-up glb_ricci {value}");
    let q = ToricDivisor::anticanonical(&b).polytope();
    let (vol, bary) = q.volume_and_barycenter().map_err(|e| e.to_string())?;
    ensure!(bary == pt(&[(1, 12), (1, 12)]), "barycenter {}", show(&bary));
    let n = q.vertices().unwrap().len();
    for apex in 1..n {
        let (v2, b2) = q.volume_and_barycenter_from(apex).map_err(|e| e.to_string())?;
        ensure!(v2 == vol && b2 == bary, "triangulation from vertex {apex} gives {v2}, {}", show(&b2));
    }
    let rays = int_rays(&b);
    let verts = divisor_vertices(&rays, &ones(&b));
    let (area, centroid) = polygon_centroid(&verts);
    ensure!(area == vol && centroid == bary, "shoelace gives {area}, {}", show(&centroid));
    ensure!(oracle_lct(&rays, &verts, &centroid) == Some(r(6, 7)), "oracle at barycenter");
    for (name, fan) in [("P2", catalog::projective_plane()), ("P1xP1", catalog::p1_x_p1())] {
        let v = glb_ricci(&fan).map_err(|e| e.to_string())?;
        ensure!(v == ri(1), "{name}: glb_ricci {v}");
        let (_, c) = polygon_centroid(&divisor_vertices(&int_rays(&fan), &ones(&fan)));
        ensure!(c == vec![Rat::zero(), Rat::zero()], "{name}: centroid {}", show(&c));
    }
    Ok(())
}

fn lp_certificate(lp: &LinearProgram, value: &Rat, x: &[Rat], y: &[Rat]) -> bool {
    let c = lp.objective();
    let primal = lp.is_satisfied_by(x) && c.iter().zip(x).map(|(a, b)| a * b).sum::<Rat>() == *value;
    let rows = lp.constraints();
    let signs = rows.iter().zip(y).all(|(row, yi)| row.relation == Relation::Eq || !yi.is_negative());
    let cols = (0..lp.variables()).all(|j| {
        let s: Rat = rows.iter().zip(y).map(|(row, yi)| &row.coefficients[j] * yi).sum();
        if lp.is_nonnegative(j) {
            s <= c[j]
        } else {
            s == c[j]
        }
    });
    let dual_value: Rat = rows.iter().zip(y).map(|(row, yi)| &row.rhs * yi).sum();
    primal && signs && cols && dual_value == *value
}

fn c9_structure(rng: &mut StdRng) -> Check {
    for (name, fan, order) in [
        ("Bl1P2", catalog::blowup_p2(), 2),
        ("P2", catalog::projective_plane(), 6),
        ("P1xP1", catalog::p1_x_p1(), 8),
        ("P1", catalog::projective_line(), 2),
        ("P3", catalog::projective_space_3(), 24),
    ] {
        let w = SymmetryGroup::automorphism_group(&fan).map_err(|e| e.to_string())?;
        ensure!(w.order() == order, "{name}: order {}", w.order());
        ensure!(w.verify_group_axioms(), "{name}: group axioms");
        let mats: BTreeSet<Vec<Vec<i64>>> = group_mats(&w).into_iter().collect();
        let n = fan.dimension();
        let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        ensure!(mats.contains(&id), "{name}: identity missing");
        for g in &mats {
            ensure!(mats.iter().any(|h| mat_mul(g, h) == id), "{name}: inverse missing");
            for h in &mats {
                ensure!(mats.contains(&mat_mul(g, h)), "{name}: product not closed");
            }
        }
        for g in w.elements() {
            for h in w.elements() {
                ensure!(w.contains(&g.compose(h)), "{name}: compose leaves the group");
            }
        }
        // G-stability of invariant divisor polytopes
        let rays = int_rays(&fan);
        let mut divisors = vec![ones(&fan)];
        if name == "Bl1P2" {
            divisors.extend(kl_family().iter().map(|&(k, l)| pkl(k, l)));
            divisors.push(vec![1, 0, 0, 1]);
        }
        for h in test_subgroups(&fan) {
            for a in &divisors {
                let d = ToricDivisor::from_i64(&fan, a).unwrap();
                if !h.is_divisor_invariant(&d) {
                    continue;
                }
                let verts: BTreeSet<Pt> = divisor_vertices(&rays, a).into_iter().collect();
                for g in group_mats(&h) {
                    let image: BTreeSet<Pt> = verts
                        .iter()
                        .map(|v| (0..n).map(|c| (0..n).map(|i| &ri(g[i][c]) * &v[i]).sum()).collect())
                        .collect();
                    ensure!(image == verts, "{name}: polytope of {a:?} not stable");
                }
            }
        }
    }

    let mut certified = 0;
    for _ in 0..200 {
        let nv = rng.gen_range(1..5);
        let mut lp = LinearProgram::new(nv);
        for j in 0..nv {
            if rng.gen_bool(0.3) {
                lp.set_free(j);
            }
            let mut e = vec![Rat::zero(); nv];
            e[j] = ri(1);
            lp.le(e.clone(), ri(rng.gen_range(1..6)));
            lp.ge(e, ri(-rng.gen_range(0..6)));
        }
        for _ in 0..rng.gen_range(0..4) {
            let row: Vec<Rat> = (0..nv).map(|_| ri(rng.gen_range(-3..4))).collect();
            let rhs = r(rng.gen_range(-6..3), rng.gen_range(1..4));
            if rng.gen_bool(0.2) {
                lp.eq(row, rhs);
            } else {
                lp.ge(row, rhs);
            }
        }
        lp.minimize((0..nv).map(|_| ri(rng.gen_range(-4..5))).collect());
        match lp.solve().map_err(|e| e.to_string())? {
            LpSolution::Optimal(opt) => {
                ensure!(lp.certifies(&opt.value, &opt.dual), "library certificate rejected");
                ensure!(lp_certificate(&lp, &opt.value, &opt.point, &opt.dual), "independent certificate rejected");
                certified += 1;
            }
            LpSolution::Infeasible => {}
            LpSolution::Unbounded => return Err("bounded LP reported unbounded".into()),
        }
    }
    ensure!(certified > 50, "only {certified} optimal LPs");

    for trial in 0..100 {
        let n = rng.gen_range(1..=3);
        let mut normals: Vec<Vec<i64>> = Vec::new();
        let mut offsets: Vec<Rat> = Vec::new();
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = 1;
            normals.push(e.clone());
            offsets.push(ri(-rng.gen_range(1..5)));
            e[j] = -1;
            normals.push(e);
            offsets.push(ri(-rng.gen_range(1..5)));
        }
        for _ in 0..rng.gen_range(0..=(10 - 2 * n)) {
            let u: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..4)).collect();
            if u.iter().all(|&x| x == 0) {
                continue;
            }
            normals.push(u);
            offsets.push(r(-rng.gen_range(0..7), rng.gen_range(1..3)));
        }
        let h = RationalPolytope::new(
            n,
            normals
                .iter()
                .zip(&offsets)
                .map(|(u, o)| (u.iter().map(|&x| BigInt::from(x)).collect(), o.clone()))
                .collect(),
        )
        .map_err(|e| e.to_string())?;
        let verts = h.vertices().map_err(|e| e.to_string())?.to_vec();
        ensure!(verts == h_vertices(&normals, &offsets), "trial {trial}: vertex sets differ");
        let v = VPolytope::new(verts.clone()).map_err(|e| e.to_string())?;
        let mut probes: Vec<Pt> = verts.clone();
        for _ in 0..25 {
            probes.push((0..n).map(|_| r(rng.gen_range(-24..25), rng.gen_range(1..5))).collect());
        }
        for _ in 0..5 {
            probes.push(random_combination(rng, &verts));
        }
        for p in &probes {
            let in_h = normals.iter().zip(&offsets).all(|(u, o)| dot_i(u, p) >= *o);
            ensure!(h.contains(p, false) == in_h, "trial {trial}: H-membership at {}", show(p));
            ensure!(v.contains(p).map_err(|e| e.to_string())? == in_h, "trial {trial}: V-membership at {}", show(p));
        }
    }
    Ok(())
}

fn c10_grid_oracle() -> Check {
    let mut cases: Vec<(String, Fan, Vec<i64>, SymmetryGroup)> = Vec::new();
    for (k, l) in kl_family() {
        let b = catalog::blowup_p2();
        let g = swap(&b);
        cases.push((format!("P({k},{l}) swap"), b, pkl(k, l), g));
    }
    for (name, fan) in catalog::all() {
        for h in test_subgroups(&fan) {
            let a = ones(&fan);
            cases.push((format!("{name} -K |H|={}", h.order()), fan.clone(), a, h));
        }
    }
    for (name, fan, a, h) in &cases {
        let d = NefBigDivisor::new(ToricDivisor::from_i64(fan, a).unwrap()).unwrap();
        let res = d.alpha(h).map_err(|e| format!("{name}: {e}"))?;
        let rays = int_rays(fan);
        let grid = integer_grid(&rays, a, &group_mats(h), 8);
        ensure!(grid.min >= res.alpha, "{name}: grid minimum {} below alpha {}", grid.min, res.alpha);
        let verts = divisor_vertices(&rays, a);
        ensure!(
            oracle_lct(&rays, &verts, &res.minimizing_point) == Some(res.alpha.clone()),
            "{name}: oracle at the minimizer differs from alpha"
        );
        ensure!(
            grid.argmin.contains(&res.minimizing_point) && grid.min == res.alpha,
            "{name}: minimizer {} not a grid minimum ({} points, min {})",
            show(&res.minimizing_point),
            grid.points,
            grid.min
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let mut rng = StdRng::seed_from_u64(0x7a1f_a11a);
    let criteria: Vec<Criterion> = vec![
        ("alpha of the P(k,l) family on the blow-up", Box::new(|_| c1_family())),
        ("anticanonical polytope and alpha of the blow-up", Box::new(|_| c2_anticanonical_blowup())),
        ("threshold 1 at the origin on every fan", Box::new(|_| c3_origin())),
        ("boundary formula equals vertex minimum over subgroups", Box::new(|_| c4_fano_consistency())),
        ("antipodal ratio on random boundary points", Box::new(c5_antipodal)),
        ("containment sandwich at 999/1000 and 1001/1000", Box::new(c6_sandwich)),
        ("general Newton bodies", Box::new(c7_newton_bodies)),
        ("Ricci lower bound via barycenter", Box::new(|_| c8_ricci())),
        ("groups, LP certificates, vertex enumeration", Box::new(c9_structure)),
        ("grid oracle with denominators up to 8", Box::new(|_| c10_grid_oracle())),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| check(&mut rng)))
            .unwrap_or_else(|e| Err(format!("panic: {:?}", e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())))));
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(()) => println!("PASS {:>2}  {name}  ({ms} ms)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2}  {name}: {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
