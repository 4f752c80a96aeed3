//! The theta operator modulo `p^m`.
//!
//! `G_2` is congruent modulo `p^m` to `sum_j p^j f_j` with `f_j` honest
//! level-one forms of weights `k_0 < ... < k_{m-1}`. Padding each `f_j` with a
//! power of the Hasse invariant `E_{p-1}` lifts every summand to the single
//! weight `k(m) = 2 + 2p^{m-1}(p-1)`, and then
//!
//! ```text
//! theta f = (1/12) d f - 2k G_2 f
//!         = (1/12) E_{p-1}^{2p^{m-1}} d f - 2k f sum_j p^j E_{p-1}^{p^{m-j-1} t_j} f_j   (mod p^m)
//! ```
//!
//! is a form of weight `k + k(m)`.

mod decomposition;
mod theta;
mod verify;

pub use decomposition::{
    build_decomposition, find_v_approximation, v_expansion_sum, DecompositionEntry, G2Decomposition,
};
pub use theta::{ThetaOperator, ThetaResult};
pub use verify::{
    verify_bernoulli_congruence, verify_commutation, verify_optimal_weight, CommutationReport, OptimalWeightReport,
};

/// `k_j`: `p + 1` when `m = 1`; otherwise `2 + p^{m-j-1}(p^{j+1} - 1)` for
/// `j <= m - 2` and `p^{m-1}(p + 1)` for `j = m - 1`.
pub fn weights_kj(p: u64, m: u32, j: u32) -> u32 {
    assert!(j < m, "index {j} out of range for m = {m}");
    let w = if m == 1 {
        p + 1
    } else if j == m - 1 {
        p.pow(m - 1) * (p + 1)
    } else {
        2 + p.pow(m - j - 1) * (p.pow(j + 1) - 1)
    };
    w as u32
}

/// `k(m) = 2 + 2p^{m-1}(p-1)`.
pub fn km(p: u64, m: u32) -> u32 {
    (2 + 2 * p.pow(m - 1) * (p - 1)) as u32
}

/// `t_j` with `k(m) = k_j + t_j p^{m-j-1}(p-1)`.
pub fn tj(p: u64, m: u32, j: u32) -> u64 {
    let step = p.pow(m - j - 1) * (p - 1);
    let diff = (km(p, m) - weights_kj(p, m, j)) as u64;
    assert_eq!(diff % step, 0, "k(m) - k_j is not a multiple of p^(m-j-1)(p-1)");
    diff / step
}
