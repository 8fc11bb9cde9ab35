//! Inputs shared by the benchmarks.

use qmock_core::dsl::{parse, Expr};
use qmock_core::theta::j_m;
use qmock_core::{QExponent, QSeries};

/// `(q;q)_∞` to `order`, a dense series with small coefficients.
pub fn euler(order: i64) -> QSeries {
    j_m(&QExponent::from_int(1), &QExponent::from_int(order)).expect("J_1")
}

/// Corpus-style identities of increasing weight, as `(name, lhs - rhs)`.
pub fn identities() -> Vec<(&'static str, Expr)> {
    [
        ("psi-hecke", "1 + 2 psi(q) - (nj(2, 1, -1/2, -1/2, -1, 1) + q nj(2, 3, -1/2, -1/2, -1, 1)) / Jm(1)"),
        ("psibar0-g", "psibar0(q) - (2 - 2q g(-q, q^8) - J(1, 2) JB(3, 8) / Jm(2))"),
        ("phi-four-m", "phi(q) - (m(q^5, q^12, q^4) + m(q^5, q^12, q^8) + q^-1 m(q, q^12, q^4) + q^-1 m(q, q^12, q^8))"),
    ]
    .into_iter()
    .map(|(n, s)| (n, parse(s).expect("bench expression parses")))
    .collect()
}
