//! Special functions: complex gamma, the Ferrers-type function `T_ν^σ`,
//! spherical harmonics and Wigner symbols.

pub mod ferrers;
pub mod gamma;
pub mod harmonics;
pub mod wigner;

pub use ferrers::{
    ferrers_t, ferrers_t_eval, ferrers_t_zero, gamma_l, phase_n, wronskian_rhs, FerrersArg,
    FerrersEval, FerrersShell, OrderDegree, Route,
};
pub use gamma::{factorial, gamma, gamma_real, ln_gamma, GAMMA_REL_TOL};
pub use harmonics::{legendre_p, lm_index, sph_harm_table, spherical_harmonic, table_len};
pub use wigner::{small_d, three_j, wigner_d, wigner_d_matrix, EulerAngles};
