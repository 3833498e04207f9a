//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use kanloop::cw::{
    builders, gamma_basis, gamma_basis_rank, intersection_form, is_nondegenerate, GammaSymbol,
};
use kanloop::flow::{descend, FlowConfig};
use kanloop::lie::{quaternion_units, GroupElement, Perm};
use kanloop::realization::{
    boundary_deviation, classify_component, primitive_decompose, primitive_recompose, pushforward,
    surface_relator, tau, HomPoint, PathStrategy, Realizer,
};
use kanloop::{
    FreeSimplicialGroup, GammaWord, GroupKind, GroupSpec, ReducedCWComplex, Word,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn kan(y: &ReducedCWComplex) -> FreeSimplicialGroup {
    y.kan_group().expect("fixture is valid")
}

fn identity_fixtures() -> Vec<(&'static str, FreeSimplicialGroup)> {
    vec![
        ("surface(1)", kan(&builders::surface(1))),
        ("surface(2)", kan(&builders::surface(2))),
        ("sphere(2)", kan(&builders::sphere(2))),
        ("sphere(3)", kan(&builders::sphere(3))),
        ("rp3-like", kan(&builders::rp3_like())),
        ("cp2", kan(&builders::cp2())),
        ("s2xs2", kan(&builders::s2_times_s2())),
    ]
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let fixtures = identity_fixtures();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut violations = Vec::new();
    let cases = 10_000;
    for case in 0..cases {
        let family = case % 5;
        let (name, k, q) = loop {
            let (name, k) = &fixtures[rng.gen_range(0..fixtures.len())];
            let q = rng.gen_range(if family == 0 { 2 } else { 1 }..=4);
            if !k.enumerate_generators(q).is_empty() {
                break (name, k, q);
            }
        };
        let w = random_word(k, q, 6, &mut rng);
        let (lhs, rhs, label) = match family {
            0 => {
                let j = rng.gen_range(1..=q);
                let i = rng.gen_range(0..j);
                (
                    k.face(i, &k.face(j, &w).unwrap()).unwrap(),
                    k.face(j - 1, &k.face(i, &w).unwrap()).unwrap(),
                    format!("d{i} d{j}"),
                )
            }
            1 => {
                let j = rng.gen_range(1..=q);
                let i = rng.gen_range(0..j);
                (
                    k.face(i, &w.degeneracy(j).unwrap()).unwrap(),
                    k.face(i, &w).unwrap().degeneracy(j - 1).unwrap(),
                    format!("d{i} s{j}"),
                )
            }
            2 => {
                let j = rng.gen_range(0..=q);
                let i = j + rng.gen_range(0..=1);
                (k.face(i, &w.degeneracy(j).unwrap()).unwrap(), w.clone(), format!("d{i} s{j}"))
            }
            3 => {
                let j = rng.gen_range(0..q);
                let i = rng.gen_range(j + 2..=q + 1);
                (
                    k.face(i, &w.degeneracy(j).unwrap()).unwrap(),
                    k.face(i - 1, &w).unwrap().degeneracy(j).unwrap(),
                    format!("d{i} s{j}"),
                )
            }
            _ => {
                let j = rng.gen_range(0..=q);
                let i = rng.gen_range(0..=j);
                (
                    w.degeneracy(j).unwrap().degeneracy(i).unwrap(),
                    w.degeneracy(i).unwrap().degeneracy(j + 1).unwrap(),
                    format!("s{i} s{j}"),
                )
            }
        };
        if lhs != rhs {
            violations.push(format!("{name}: {label} on {w}"));
        }
    }
    let elapsed = start.elapsed();
    check(violations.is_empty(), || {
        format!("{} violations, first: {}", violations.len(), violations[0])
    })?;
    check(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("{cases} cases, 0 violations, {:.2?}", elapsed))
}

fn criterion_2() -> Outcome {
    for genus in 0..=3 {
        let k = kan(&builders::surface(genus));
        let r = k.basis(1)[0].clone();
        let rw = generator(&r, &[]);
        check(k.face(0, &rw).unwrap().is_identity(), || format!("genus {genus}: d0 r != e"))?;
        let mut expected = Word::identity(0);
        for j in 1..=genus {
            let x = generator(&k.alphabet().get(&format!("x{j}")).unwrap().clone(), &[]);
            let y = generator(&k.alphabet().get(&format!("y{j}")).unwrap().clone(), &[]);
            expected = expected.multiply(&Word::commutator(&x, &y).unwrap()).unwrap();
        }
        let d1 = k.face(1, &rw).unwrap();
        check(d1 == expected, || format!("genus {genus}: d1 r = {d1}, expected {expected}"))?;
    }

    let spines = [
        (
            builders::rp3_like(),
            vec![("x", "r", 1), ("e", "r", -1)],
        ),
        (
            builders::spine3(&["x"], &[("r", "x^3")], &[("x", "r", 1), ("e", "r", -1)]).unwrap(),
            vec![("x", "r", 1), ("e", "r", -1)],
        ),
        (
            builders::spine3(
                &["x", "y"],
                &[("a", "x^2"), ("b", "y^3")],
                &[("x", "a", 1), ("e", "a", -1), ("y^-1", "b", 1), ("e", "b", -1)],
            )
            .unwrap(),
            vec![("x", "a", 1), ("e", "a", -1), ("y^-1", "b", 1), ("e", "b", -1)],
        ),
    ];
    for (n, (y, terms)) in spines.iter().enumerate() {
        let k = kan(y);
        let sigma = generator(y.cell("sigma").unwrap(), &[]);
        for j in 0..2 {
            check(k.face(j, &sigma).unwrap().is_identity(), || format!("spine {n}: d{j} sigma != e"))?;
        }
        let mut expected = Word::identity(1);
        for (z, r, eps) in terms {
            let s0z = k.parse_word(z, 0).unwrap().degeneracy(0).unwrap();
            let rr = generator(y.cell(r).unwrap(), &[]).pow(*eps as i64);
            expected = expected
                .multiply(&s0z.multiply(&rr).unwrap().multiply(&s0z.invert()).unwrap())
                .unwrap();
        }
        let d2 = k.face(2, &sigma).unwrap();
        check(d2 == expected, || format!("spine {n}: d2 sigma = {d2}, expected {expected}"))?;
        check(k.face(1, &d2).unwrap().is_identity(), || format!("spine {n}: d1 d2 sigma != e"))?;
    }

    let fours = [
        builders::cp2(),
        builders::s2_times_s2(),
        builders::four_complex(2, GammaWord::parse("v1*w1_2^-1*v2").unwrap()).unwrap(),
        builders::four_complex(3, GammaWord::parse("w1_3*w2_3*v3^2").unwrap()).unwrap(),
    ];
    for (n, y) in fours.iter().enumerate() {
        let k = kan(y);
        let sigma = generator(y.cell("sigma").unwrap(), &[]);
        for j in 0..3 {
            check(k.face(j, &sigma).unwrap().is_identity(), || format!("4-complex {n}: d{j} sigma != e"))?;
        }
        let r = y.gamma_words().values().next().unwrap();
        let mut expected = Word::identity(2);
        for &(s, inv) in r.letters() {
            let x = |j: usize| y.cell(&format!("x{j}")).unwrap().clone();
            let v = |j: usize| Word::commutator(&generator(&x(j), &[0]), &generator(&x(j), &[1])).unwrap();
            let word = match s {
                GammaSymbol::V(j) => v(j),
                GammaSymbol::W(i, j) => {
                    let c = generator(&x(i), &[0]);
                    c.multiply(&v(j)).unwrap().multiply(&c.invert()).unwrap()
                }
            };
            expected = expected.multiply(&if inv { word.invert() } else { word }).unwrap();
        }
        let d3 = k.face(3, &sigma).unwrap();
        check(d3 == expected, || format!("4-complex {n}: d3 sigma = {d3}, expected {expected}"))?;
    }
    Ok("surface genus 0..3, 3 spines, 4 four-complexes exact".into())
}

fn criterion_3() -> Outcome {
    for genus in 0..=3 {
        let k = kan(&builders::surface(genus));
        for q in 2..=6 {
            let n = k.enumerate_generators(q).len();
            check(n == 2 * genus + q, || format!("surface({genus}) K_{q}: {n} generators"))?;
        }
    }
    for rank in 1..=4 {
        let basis = gamma_basis(rank);
        let word = GammaWord::from_letters(basis.iter().map(|&s| (s, false)));
        let k = kan(&builders::four_complex(rank, word).unwrap());
        let n = k.enumerate_generators(3).len();
        check(n == 3 * rank + 1, || format!("4-complex rank {rank} K_3: {n} generators"))?;
        let r = gamma_basis_rank(rank);
        let expected = rank * (rank + 1) / 2;
        check(r == expected && basis.len() == expected, || {
            format!("rank {rank}: Γ basis rank {r}, expected {expected}")
        })?;
    }
    Ok("surface ℓ∈0..3 q∈2..6, 4-complex ℓ∈1..4, Γ rank ℓ∈1..4".into())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let k = kan(&builders::sphere(2));
    let x = k.basis(1)[0].clone();
    let c = Word::commutator(&generator(&x, &[0]), &generator(&x, &[1])).unwrap();
    check(k.moore_member(&c).unwrap(), || "[s0 x, s1 x] not a Moore member".into())?;
    check(k.moore_boundary(&c).unwrap().is_identity(), || "[s0 x, s1 x] has non-trivial boundary".into())?;
    check(!k.moore_member(&generator(&x, &[0])).unwrap(), || "s0 x accepted as Moore member".into())?;
    let mut count = 1;
    for rank in 1..=4 {
        let y = builders::four_complex(rank, GammaWord::parse("v1").unwrap()).unwrap();
        let k = kan(&y);
        let spheres: Vec<_> = (1..=rank).map(|j| y.cell(&format!("x{j}")).unwrap().clone()).collect();
        for s in gamma_basis(rank) {
            let w = s.expand(&spheres).unwrap();
            check(k.moore_member(&w).unwrap(), || format!("{s} not a Moore member"))?;
            check(k.moore_boundary(&w).unwrap().is_identity(), || format!("{s} has non-trivial boundary"))?;
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("{count} cycles, {:.2?}", elapsed))
}

/// Hand-written reduced cellular chain complexes: `(dims, boundaries)` by
/// cell dimension, `boundaries[d]` with one row per `(d-1)`-cell.
fn cellular(name: &str) -> (Vec<usize>, Vec<Vec<Vec<i64>>>) {
    let sphere = |q: usize| {
        let mut dims = vec![0; q + 1];
        dims[q] = 1;
        let bd = (0..=q).map(|d| if d >= 1 && dims[d - 1] > 0 { vec![vec![0; dims[d]]; dims[d - 1]] } else { vec![] }).collect();
        (dims, bd)
    };
    let surface = |g: usize| (vec![0, 2 * g, 1], vec![vec![], vec![], vec![vec![0]; 2 * g]]);
    match name {
        "S1" => sphere(1),
        "S2" => sphere(2),
        "S3" => sphere(3),
        "S4" => sphere(4),
        "Sigma0" => surface(0),
        "Sigma1" => surface(1),
        "Sigma2" => surface(2),
        "Sigma3" => surface(3),
        "CP2" => (vec![0, 0, 1, 0, 1], vec![vec![], vec![], vec![], vec![vec![]], vec![]]),
        "RP3-like" => (vec![0, 1, 1, 1], vec![vec![], vec![], vec![vec![2]], vec![vec![0]]]),
        _ => unreachable!(),
    }
}

fn criterion_5() -> Outcome {
    let spaces: Vec<(&str, ReducedCWComplex)> = vec![
        ("S1", builders::sphere(1)),
        ("S2", builders::sphere(2)),
        ("S3", builders::sphere(3)),
        ("S4", builders::sphere(4)),
        ("Sigma0", builders::surface(0)),
        ("Sigma1", builders::surface(1)),
        ("Sigma2", builders::surface(2)),
        ("Sigma3", builders::surface(3)),
        ("CP2", builders::cp2()),
        ("RP3-like", builders::rp3_like()),
    ];
    let mut torsion_seen = false;
    for (name, y) in &spaces {
        let k = kan(y);
        let top = y.top_dim();
        let computed = k.homology(top).map_err(|e| format!("{name}: {e}"))?;
        let (dims, bd) = cellular(name);
        let oracle = chain_homology(&dims, &bd);
        for h in &computed {
            let (betti, torsion) = oracle.get(h.degree + 1).cloned().unwrap_or((0, vec![]));
            let got: Vec<i128> = h.torsion.iter().map(|&t| t as i128).collect();
            check(h.betti == betti && got == torsion, || {
                format!(
                    "{name} H_{}: betti {} torsion {:?}, oracle betti {betti} torsion {torsion:?}",
                    h.degree, h.betti, h.torsion
                )
            })?;
            torsion_seen |= !got.is_empty();
        }
    }
    check(torsion_seen, || "no torsion class observed".into())?;
    Ok(format!("{} spaces match, including Z/2 for RP3-like", spaces.len()))
}

fn criterion_6() -> Outcome {
    let spec = GroupSpec::new(GroupKind::Su2);
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let qi = [[z, i], [i, z]];
    let qj = [[z, one], [-one, z]];
    let dagger = |m: &[[Complex64; 2]; 2]| [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]];
    let units = quaternion_units();
    let close = |a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]| {
        (0..2).flat_map(|r| (0..2).map(move |c| (r, c))).map(|(r, c)| (a[r][c] - b[r][c]).norm()).fold(0.0, f64::max)
    };
    check(close(units[0].matrix(), &qi) < 1e-15 && close(units[1].matrix(), &qj) < 1e-15, || {
        "quaternion units differ from iσ₁, iσ₂".into()
    })?;

    let y = builders::surface(1);
    let k = kan(&y);
    let relator = y.relator_words().into_values().next().unwrap();
    let x1 = k.alphabet().get("x1").unwrap().clone();
    let value = spec
        .eval_word(&relator, |g| Some(if *g.cell() == x1 { units[0] } else { units[1] }))
        .unwrap();
    let oracle = matmul(&matmul(&matmul(&qi, &qj), &dagger(&qi)), &dagger(&qj));
    let minus = [[-one, z], [z, -one]];
    let err = close(value.matrix(), &minus).max(close(&oracle, &minus));
    check(err < 1e-12, || format!("commutator deviates from -I by {err:e}"))?;

    let u1 = GroupSpec::new(GroupKind::U1);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let genus = rng.gen_range(1..=4);
        let y = builders::surface(genus);
        let k = kan(&y);
        let relator = y.relator_words().into_values().next().unwrap();
        let values: BTreeMap<String, GroupElement> = k
            .basis(0)
            .iter()
            .map(|c| (c.name().to_string(), u1.random(&mut rng)))
            .collect();
        let v = u1.eval_word(&relator, |g| values.get(g.cell().name()).copied()).unwrap();
        worst = worst.max((v.phase() - 1.0).norm());
    }
    check(worst < 1e-12, || format!("U(1) relator deviates by {worst:e}"))?;
    Ok(format!("commutator error {err:.1e}, U(1) worst {worst:.1e} on 1000 inputs"))
}

fn criterion_7() -> Outcome {
    let u1 = GroupSpec::new(GroupKind::U1);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut runs = 0;
    for n in -3i64..=3 {
        let w = [u1.random(&mut rng), u1.random(&mut rng)];
        let seed = rng.gen::<u64>();
        for m in [64, 128, 256] {
            let phi = u1_winding_loop(n, m, 1.0, &mut ChaCha8Rng::seed_from_u64(seed));
            for s in [PathStrategy::Geodesic, PathStrategy::GeodesicThenConstant] {
                let c = classify_component(&w, &phi, &u1, s).map_err(|e| e.to_string())?;
                check(c == n, || format!("U(1) n={n} m={m} {s:?}: class {c}"))?;
                runs += 1;
            }
        }
    }
    let su2 = GroupSpec::new(GroupKind::Su2);
    for _ in 0..20 {
        let w = [su2.random(&mut rng), su2.random(&mut rng), su2.random(&mut rng), su2.random(&mut rng)];
        let phi = wiggly_path(&su2, &surface_relator(&w).unwrap(), 128, 1.0, &mut rng);
        for s in [PathStrategy::Geodesic, PathStrategy::GeodesicThenConstant] {
            let c = classify_component(&w, &phi, &su2, s).map_err(|e| e.to_string())?;
            check(c == 0, || format!("SU(2) class {c}"))?;
        }
    }
    let so3 = GroupSpec::new(GroupKind::So3);
    let w = [GroupElement::identity(), GroupElement::identity()];
    let mut classes = Vec::new();
    for turns in [1.0, 2.0] {
        // Rotation by 2π·turns about the z-axis, lifted to SU(2).
        let phi: Vec<GroupElement> = (0..=128)
            .map(|k| so3.exp([0.0, 0.0, PI_F * turns * k as f64 / 128.0]))
            .collect();
        classes.push(classify_component(&w, &phi, &so3, PathStrategy::Geodesic).map_err(|e| e.to_string())?);
    }
    check(classes == [1, 0], || format!("SO(3) 2π/4π loops classify as {classes:?}"))?;
    Ok(format!("{runs} U(1) runs exact, SU(2) 0, SO(3) 2π loop -> 1"))
}

const PI_F: f64 = std::f64::consts::PI;

fn perturb_top_sample<R: Rng>(r: &Realizer, p: &mut kanloop::realization::RealizationPoint, size: f64, rng: &mut R) {
    let q = r.top_degree();
    let grid = r.grid(q);
    let constrained: Vec<usize> = (0..grid.len()).filter(|&i| (0..=q).any(|j| grid.on_face(i, j))).collect();
    let idx = constrained[rng.gen_range(0..constrained.len())];
    let gen = rng.gen_range(0..r.group().basis(q).len());
    let spec = r.spec();
    let dir = loop {
        let v = spec.random_algebra(rng, 1.0);
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 {
            break [size * v[0] / n, size * v[1] / n, size * v[2] / n];
        }
    };
    let s = p.sample_mut(q, idx, gen);
    *s = s.mul(&spec.exp(dir));
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let complexes = [
        builders::surface(1),
        builders::surface(2),
        builders::rp3_like(),
        builders::cp2(),
        builders::s2_times_s2(),
    ];
    let groups: Vec<_> = complexes.iter().map(kan).collect();
    let kinds = [GroupKind::U1, GroupKind::Su2, GroupKind::So3];
    let (mut passed, mut caught, mut worst_ratio) = (0, 0, 1.0f64);
    for n in 0..100 {
        let which = n % complexes.len();
        let spec = GroupSpec::new(kinds[(n / complexes.len()) % 3]);
        let m = if which < 2 { 32 } else { 6 };
        let r = Realizer::new(&groups[which], spec, m).unwrap();
        let mut p = if which < 2 {
            let w: Vec<_> = (0..groups[which].basis(0).len()).map(|_| spec.random(&mut rng)).collect();
            let phi = wiggly_path(&spec, &surface_relator(&w).unwrap(), m as usize, 0.8, &mut rng);
            r.surface_point(&w, &phi).unwrap()
        } else {
            r.random_point(0.4, &mut rng).unwrap()
        };
        let report = r.validate(&p).unwrap();
        check(report.pass, || format!("point {n} fails: {report:?}"))?;
        passed += 1;

        perturb_top_sample(&r, &mut p, 1e-3, &mut rng);
        let report = r.validate(&p).unwrap();
        let ratio = report.max_violation / 1e-3;
        check(!report.pass && (0.5..=2.0).contains(&ratio), || {
            format!("perturbed point {n}: pass={} violation {:e}", report.pass, report.max_violation)
        })?;
        caught += 1;
        worst_ratio = if (ratio.ln()).abs() > worst_ratio.ln().abs() { ratio } else { worst_ratio };
    }
    Ok(format!("{passed} constructed points pass, {caught} perturbations caught, worst violation/perturbation {worst_ratio:.4}"))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cp2 = GammaWord::parse("v1").unwrap();
    let su2 = GroupSpec::new(GroupKind::Su2);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let phi1 = random_loop(&su2, 1, 128, &mut rng);
        let values = tau(&phi1, &cp2, &su2).map_err(|e| e.to_string())?;
        worst = worst.max(boundary_deviation(&values, 128, &su2).unwrap());
    }
    check(worst <= 1e-10, || format!("boundary deviation {worst:e}"))?;
    let u1 = GroupSpec::new(GroupKind::U1);
    let mut worst_u1 = 0.0f64;
    for _ in 0..20 {
        let phi1 = random_loop(&u1, 1, 128, &mut rng);
        for v in tau(&phi1, &cp2, &u1).map_err(|e| e.to_string())? {
            worst_u1 = worst_u1.max((v.phase() - 1.0).norm());
        }
    }
    check(worst_u1 <= 1e-12, || format!("U(1) tau deviates by {worst_u1:e}"))?;
    Ok(format!("SU(2) boundary deviation {worst:.1e}, U(1) deviation {worst_u1:.1e}"))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let u1 = GroupSpec::new(GroupKind::U1);
    let cfg = FlowConfig {
        steps: 5000,
        m: 256,
        ..FlowConfig::default()
    };
    let start = Instant::now();
    let mut details = Vec::new();
    for n in 1i64..=3 {
        let w = [u1.random(&mut rng), u1.random(&mut rng)];
        let phi0 = u1_winding_loop(n, 256, 1.5, &mut rng);
        let res = descend(&w, &phi0, &cfg, &u1).map_err(|e| e.to_string())?;
        let target = 4.0 * PI_F * PI_F * (n * n) as f64;
        let rel = (res.final_energy() - target).abs() / target;
        check(rel < 0.01, || format!("U(1) n={n}: energy {} vs {target}", res.final_energy()))?;
        check(res.trace.len() <= 5001, || format!("U(1) n={n}: {} steps", res.trace.len() - 1))?;
        check(res.class_conserved && res.class_after == n, || format!("U(1) n={n}: class changed"))?;
        check(res.trace.windows(2).all(|t| t[1].energy <= t[0].energy), || format!("U(1) n={n}: energy increased"))?;
        details.push(format!("n={n} rel {rel:.1e} in {} steps", res.trace.len() - 1));
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(30), || format!("U(1) runs took {elapsed:?}"))?;

    let su2 = GroupSpec::new(GroupKind::Su2);
    let cfg = FlowConfig {
        steps: 5000,
        m: 128,
        ..FlowConfig::default()
    };
    let mut worst = 0.0f64;
    let mut runs = 0;
    while runs < 5 {
        let w = [su2.random(&mut rng), su2.random(&mut rng)];
        let g = surface_relator(&w).unwrap();
        if su2.log_norm(&g) > 2.8 {
            continue;
        }
        let phi0 = wiggly_path(&su2, &g, 128, 1.0, &mut rng);
        let res = descend(&w, &phi0, &cfg, &su2).map_err(|e| e.to_string())?;
        let target = su2.log_norm(&g).powi(2);
        let rel = (res.final_energy() - target).abs() / target;
        check(rel < 0.01, || format!("SU(2): energy {} vs {target}", res.final_energy()))?;
        check(res.class_conserved, || "SU(2): class changed".into())?;
        check(res.trace.windows(2).all(|t| t[1].energy <= t[0].energy), || "SU(2): energy increased".into())?;
        worst = worst.max(rel);
        runs += 1;
    }
    Ok(format!("U(1) {} ({:.2?}); SU(2) worst rel {worst:.1e} over {runs} paths", details.join(", "), elapsed))
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let groups: Vec<_> = identity_fixtures().into_iter().map(|(_, k)| k).collect();
    let su2 = GroupSpec::new(GroupKind::Su2);
    for n in 0..1000 {
        let k = &groups[rng.gen_range(0..groups.len())];
        let q = rng.gen_range(0..=4);
        let phi: HomPoint<GroupElement> = k
            .enumerate_generators(q)
            .into_iter()
            .map(|g| (g, su2.random(&mut rng)))
            .collect();
        let coords = primitive_decompose(k, q, &phi).map_err(|e| e.to_string())?;
        let back = primitive_recompose(k, &coords).map_err(|e| e.to_string())?;
        check(back == phi, || format!("round trip {n} (degree {q}) differs"))?;
    }
    let mut worst_float = 0.0f64;
    for n in 0..200 {
        let k = &groups[rng.gen_range(0..groups.len())];
        let (a, b, c) = (rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=3));
        let t1 = random_monotone(a, b, &mut rng);
        let t2 = random_monotone(b, c, &mut rng);
        let t21 = t2.compose(&t1).unwrap();
        for g in k.enumerate_generators(c) {
            let x = Word::generator(g);
            let lhs = k.apply_monotone(&t21, &x).unwrap();
            let rhs = k.apply_monotone(&t1, &k.apply_monotone(&t2, &x).unwrap()).unwrap();
            check(lhs == rhs, || format!("pair {n}: K(θ2θ1) != K(θ1)K(θ2) on {x}"))?;
        }
        let phi: HomPoint<Perm> = k
            .enumerate_generators(a)
            .into_iter()
            .map(|g| (g, Perm::random(6, &mut rng)))
            .collect();
        let e = Perm::identity(6);
        let lhs = pushforward(k, &t21, &phi, &e).unwrap();
        let rhs = pushforward(k, &t2, &pushforward(k, &t1, &phi, &e).unwrap(), &e).unwrap();
        check(lhs == rhs, || format!("pair {n}: pushforward not functorial"))?;

        let phi: HomPoint<GroupElement> = k
            .enumerate_generators(a)
            .into_iter()
            .map(|g| (g, su2.random(&mut rng)))
            .collect();
        let id = GroupElement::identity();
        let lhs = pushforward(k, &t21, &phi, &id).unwrap();
        let rhs = pushforward(k, &t2, &pushforward(k, &t1, &phi, &id).unwrap(), &id).unwrap();
        for (g, v) in &lhs {
            worst_float = worst_float.max(su2.distance(v, &rhs[g]));
        }
    }
    check(worst_float < 1e-12, || format!("SU(2) pushforward mismatch {worst_float:e}"))?;
    Ok(format!("1000 round trips exact, 200 pairs exact (words, permutations), SU(2) within {worst_float:.1e}"))
}

fn criterion_12() -> Outcome {
    let cp2 = intersection_form(&GammaWord::parse("v1").unwrap(), 1).unwrap();
    check(cp2[(0, 0)] == 1 && cp2.rows() == 1, || format!("CP² form {cp2:?}"))?;
    let s2s2 = intersection_form(&GammaWord::parse("w1_2").unwrap(), 2).unwrap();
    let want = [[0, 1], [1, 0]];
    check((0..2).all(|i| (0..2).all(|j| s2s2[(i, j)] == want[i][j])), || format!("S²×S² form {s2s2:?}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut degenerate, mut nondegenerate) = (0, 0);
    for n in 0..50 {
        let rank = rng.gen_range(1..=4);
        let basis = gamma_basis(rank);
        let len = rng.gen_range(0..=8);
        let letters: Vec<(GammaSymbol, bool)> = (0..len)
            .map(|_| (basis[rng.gen_range(0..basis.len())], rng.gen_bool(0.3)))
            .collect();
        let word = GammaWord::from_letters(letters.clone());
        // Symmetrization Γ(Z^ℓ) -> Z^ℓ ⊗ Z^ℓ: γ(a_j) ↦ a_j⊗a_j, [a_i, a_j] ↦ a_i⊗a_j + a_j⊗a_i.
        let mut tensor = vec![vec![0i64; rank]; rank];
        for (s, inv) in &letters {
            let e = if *inv { -1 } else { 1 };
            match *s {
                GammaSymbol::V(j) => tensor[j - 1][j - 1] += e,
                GammaSymbol::W(i, j) => {
                    tensor[i - 1][j - 1] += e;
                    tensor[j - 1][i - 1] += e;
                }
            }
        }
        let form = intersection_form(&word, rank).unwrap();
        check((0..rank).all(|i| (0..rank).all(|j| form[(i, j)] == tensor[i][j])), || {
            format!("word {n} ({word}): form {form:?} vs oracle {tensor:?}")
        })?;
        let oracle = laplace_det(&tensor) != 0;
        check(is_nondegenerate(&form) == oracle, || format!("word {n} ({word}): nondegeneracy flag"))?;
        if oracle {
            nondegenerate += 1;
        } else {
            degenerate += 1;
        }
    }
    Ok(format!("CP² [1], S²×S² hyperbolic, 50 random words ({nondegenerate} nondegenerate, {degenerate} degenerate)"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("simplicial identities", criterion_1),
        ("face values", criterion_2),
        ("generator counts", criterion_3),
        ("Moore cycles", criterion_4),
        ("homology oracle", criterion_5),
        ("word-map numerics", criterion_6),
        ("component classification", criterion_7),
        ("realization validator", criterion_8),
        ("tau map", criterion_9),
        ("energy descent", criterion_10),
        ("primitive decomposition and functoriality", criterion_11),
        ("intersection forms", criterion_12),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let label = format!("criterion {:>2} {name}", n + 1);
        if !filter.is_empty() && !filter.iter().any(|f| label.contains(f.as_str())) {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("{label}: PASS ({detail})"),
            Err(reason) => {
                failed += 1;
                println!("{label}: FAIL ({reason})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
