//! Exact coefficients, weights, the graded series ring and the linear solver.

pub mod json;
pub mod lambda;
pub mod monomial;
pub mod series;
pub mod solve;
pub mod varspec;

pub use lambda::LambdaPoly;
pub use monomial::{lambda_monomials_of_weight, lambda_weight, Monomial};
pub use series::{WeightedSeries, Window};
pub use solve::{graded_linear_solve, solve_shared, LinearSystem, Solution, SolveStatus};
pub use varspec::{VarSpec, U_WEIGHTS};
