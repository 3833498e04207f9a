//! Canonical fixtures: closed surfaces, spheres, 3-dimensional spines and
//! cofibres of maps from the 3-sphere to a wedge of 2-spheres.

use crate::cw::{GammaWord, IdentitySequence, ReducedCWComplex};
use crate::error::Result;

/// Closed orientable surface of genus `genus`, relator `Π [x_j, y_j]`.
pub fn surface(genus: usize) -> ReducedCWComplex {
    let mut y = ReducedCWComplex::new();
    let mut factors = Vec::new();
    for j in 1..=genus {
        y.add_cell(&format!("x{j}"), 1).expect("fresh name");
        y.add_cell(&format!("y{j}"), 1).expect("fresh name");
        factors.push(format!("x{j}*y{j}*x{j}^-1*y{j}^-1"));
    }
    y.add_cell("r", 2).expect("fresh name");
    let relator = if factors.is_empty() { "e".to_string() } else { factors.join("*") };
    y.set_attach2("r", &relator).expect("relator uses known cells");
    y
}

/// `S^q` with one `q`-cell `x` and trivial attaching element.
pub fn sphere(q: usize) -> ReducedCWComplex {
    assert!(q >= 1, "sphere dimension must be positive");
    let mut y = ReducedCWComplex::new();
    y.add_cell("x", q).expect("fresh name");
    y
}

/// A 3-complex with 1-cells `generators`, 2-cells given as `(name, word)`
/// and a single 3-cell `sigma` attached along an identity among relations.
pub fn spine3(
    generators: &[&str],
    relators: &[(&str, &str)],
    identity: &[(&str, &str, i32)],
) -> Result<ReducedCWComplex> {
    let mut y = ReducedCWComplex::new();
    for g in generators {
        y.add_cell(g, 1)?;
    }
    for (r, _) in relators {
        y.add_cell(r, 2)?;
    }
    for (r, w) in relators {
        y.set_attach2(r, w)?;
    }
    y.add_cell("sigma", 3)?;
    let i: IdentitySequence = y.identity_from_terms(identity)?;
    y.set_attach3("sigma", i)?;
    Ok(y)
}

/// `⟨x; r = x²; σ⟩` with `σ = (x r x⁻¹)(r⁻¹)`; homologically a copy of `RP³`.
pub fn rp3_like() -> ReducedCWComplex {
    spine3(&["x"], &[("r", "x^2")], &[("x", "r", 1), ("e", "r", -1)])
        .expect("fixture is valid")
}

/// The 4-complex `(∨_l S²) ∪_f e⁴` whose attaching element is the Γ-word `word`.
pub fn four_complex(rank: usize, word: GammaWord) -> Result<ReducedCWComplex> {
    let mut y = ReducedCWComplex::new();
    for j in 1..=rank {
        y.add_cell(&format!("x{j}"), 2)?;
    }
    y.add_cell("sigma", 4)?;
    y.set_attach4("sigma", word)?;
    Ok(y)
}

/// `CP²`: a 2-sphere with the 4-cell attached along the Hopf element `v1`.
pub fn cp2() -> ReducedCWComplex {
    four_complex(1, GammaWord::parse("v1").expect("literal")).expect("fixture is valid")
}

/// `S² × S²`: attaching element `w1_2`.
pub fn s2_times_s2() -> ReducedCWComplex {
    four_complex(2, GammaWord::parse("w1_2").expect("literal")).expect("fixture is valid")
}
