use serde::{Deserialize, Serialize};

use super::sharp_of;
use crate::matrix::{Matrix, PolyMatrix};
use crate::ring::{Laurent, Poly, Rational, Ring};

/// Nilpotent matrices over ℚ[t², t³, z, z⁻¹] whose class in `Nil₀` is
/// nontrivial. That nontriviality is carried as an annotation only
/// ([`BadRingFixture::NIL0_NOTE`]); it is not machine checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadRingFixture {
    /// 2×2 matrix over `R[s]`, degree 5, zero constant term.
    #[serde(rename = "M")]
    pub m: PolyMatrix<Laurent>,
    /// 10×10 companion of `M`.
    #[serde(rename = "N")]
    pub n: Matrix<Laurent>,
    /// `N` without its last row and column.
    #[serde(rename = "Nprime")]
    pub n_prime: Matrix<Laurent>,
}

/// One named fixture assertion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// `c · tᵃ · zᵇ` summed over the listed terms.
fn lp(terms: &[(i64, u32, i32)]) -> Laurent {
    terms.iter().fold(Laurent::zero(), |acc, &(c, t, z)| acc.plus(&Laurent::monomial(Rational::from_int(c), t, z)))
}

fn transcribed_m() -> PolyMatrix<Laurent> {
    let zero = Laurent::zero;
    // (1 - z⁻¹) t⁴
    let m11_4 = lp(&[(1, 4, 0), (-1, 4, -1)]);
    // (1 - z) t², -(1 - z) t³
    let m12_2 = lp(&[(1, 2, 0), (-1, 2, 1)]);
    let m12_3 = lp(&[(-1, 3, 0), (1, 3, 1)]);
    // (z⁻¹ - 1) tᵏ for k = 2..5
    let m21 = |k: u32| lp(&[(1, k, -1), (-1, k, 0)]);
    // (1 - z) t⁴
    let m22_4 = lp(&[(1, 4, 0), (-1, 4, 1)]);

    let block =
        |a: Laurent, b: Laurent, c: Laurent, d: Laurent| Matrix::from_rows(vec![vec![a, b], vec![c, d]]).expect("2x2");
    let coeffs = vec![
        Matrix::zeros(2, 2),
        Matrix::zeros(2, 2),
        block(zero(), m12_2, m21(2), zero()),
        block(zero(), m12_3, m21(3), zero()),
        block(m11_4, zero(), m21(4), m22_4),
        block(zero(), zero(), m21(5), zero()),
    ];
    PolyMatrix::new(2, coeffs).expect("fixture M")
}

fn transcribed_n() -> Matrix<Laurent> {
    let mut n = Matrix::zeros(10, 10);
    n[(0, 3)] = lp(&[(1, 2, 0), (-1, 2, 1)]);
    n[(0, 5)] = lp(&[(-1, 3, 0), (1, 3, 1)]);
    n[(0, 6)] = lp(&[(1, 4, 0), (-1, 4, -1)]);
    n[(1, 2)] = lp(&[(1, 2, -1), (-1, 2, 0)]);
    n[(1, 4)] = lp(&[(1, 3, -1), (-1, 3, 0)]);
    n[(1, 6)] = lp(&[(1, 4, -1), (-1, 4, 0)]);
    n[(1, 7)] = lp(&[(1, 4, 0), (-1, 4, 1)]);
    n[(1, 8)] = lp(&[(1, 5, -1), (-1, 5, 0)]);
    for r in 2..10 {
        n[(r, r - 2)] = Laurent::one();
    }
    n
}

/// The fixture. `N` is transcribed entry by entry and checked against
/// `sharp_of(M, 5, 2)`.
pub fn badring_fixture() -> BadRingFixture {
    let m = transcribed_m();
    let n = transcribed_n();
    let derived = sharp_of(&m, 5, 2).expect("M is over tR[s]");
    assert_eq!(derived, n, "transcribed N disagrees with the companion of M");
    let n_prime = n.drop_last().expect("10x10");
    BadRingFixture { m, n, n_prime }
}

impl BadRingFixture {
    pub const NIL0_NOTE: &'static str = "N and N' are asserted nontrivial in Nil0(R); not machine-checked";

    /// Copy with one entry of `N` perturbed, for negative controls.
    pub fn tampered(&self) -> Self {
        let mut out = self.clone();
        out.n[(1, 2)] = out.n[(1, 2)].plus(&Laurent::monomial(Rational::one(), 2, 0));
        out.n_prime = out.n.drop_last().expect("10x10");
        out
    }

    pub fn checks(&self) -> Vec<FixtureCheck> {
        let mut out = Vec::new();
        let mut push = |name: &str, pass: bool, detail: String| {
            out.push(FixtureCheck { name: name.to_string(), pass, detail });
        };

        for (label, mat) in [("N", &self.n), ("N'", &self.n_prime)] {
            let nil = mat.nilpotency();
            let detail = match nil.index {
                Some(k) => format!("{label}^{k} = 0, {label}^{} != 0", k - 1),
                None => format!("{label}^{} != 0", mat.rows()),
            };
            push(&format!("nilpotent {label}"), nil.nilpotent, detail);
        }

        let m_ok = self.m.coeffs().iter().all(|c| c.entries().iter().all(Laurent::in_subring));
        let n_ok = self.n.entries().iter().all(Laurent::in_subring);
        let np_ok = self.n_prime.entries().iter().all(Laurent::in_subring);
        push("subring membership", m_ok && n_ok && np_ok, format!("M: {m_ok}, N: {n_ok}, N': {np_ok}"));

        let rebuilt = sharp_of(&self.m, 5, 2);
        let same = rebuilt.as_ref().map(|r| r == &self.n).unwrap_or(false);
        push("sharp(M) = N", same, "entrywise comparison, k = 5, n = 2".into());

        let cut = self.n.drop_last().map(|c| c == self.n_prime).unwrap_or(false);
        push("N' = N minus last row/column", cut, String::new());

        let det = self.m.det_identity_minus();
        push("det(I - M) = 1", det == Poly::one(), format!("det(I - M) = {det}"));
        out
    }

    pub fn all_pass(&self) -> bool {
        self.checks().iter().all(|c| c.pass)
    }
}
