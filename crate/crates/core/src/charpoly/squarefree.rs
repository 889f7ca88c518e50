//! Yun's square-free decomposition over the Gaussian rationals.

use super::poly::Polynomial;

/// A square-free factor together with the multiplicity it appears with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareFreeFactor {
    pub factor: Polynomial,
    pub multiplicity: usize,
}

/// Writes `p = lead · Π factorₖ^{multₖ}` with monic, square-free, pairwise
/// coprime factors. Factors are listed by increasing multiplicity.
///
/// Panics on a constant input.
pub fn square_free_decompose(p: &Polynomial) -> Vec<SquareFreeFactor> {
    assert!(!p.is_constant(), "square-free decomposition of a constant");
    let f = p.monic();
    let df = f.derivative();
    let g = f.gcd(&df);
    let mut c = f.div_exact(&g);
    let mut d = df.div_exact(&g).sub(&c.derivative());
    let mut out = Vec::new();
    let mut mult = 1;
    while !c.is_constant() {
        let a = c.gcd(&d);
        c = c.div_exact(&a);
        d = d.div_exact(&a).sub(&c.derivative());
        if !a.is_constant() {
            out.push(SquareFreeFactor {
                factor: a,
                multiplicity: mult,
            });
        }
        mult += 1;
    }
    out
}
