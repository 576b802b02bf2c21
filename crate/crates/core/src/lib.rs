//! Learning-augmented primal-dual algorithms for online covering problems.
//!
//! Each problem module runs an online algorithm that builds a monotone fractional
//! primal solution and a dual solution side by side, taking advice from a
//! prediction whose trust is set by `lambda ∈ (0, 1]`. At `lambda = 1` the advice
//! is ignored and the classic online algorithm comes out; smaller values follow
//! the prediction more closely.
//!
//! - [`setcover`]: online fractional weighted set cover
//! - [`skirental`]: ski rental, plus the lower-bound certificate
//! - [`bahncard`]: the Bahncard problem
//! - [`tcpack`]: dynamic TCP acknowledgement
//!
//! Offline optima live in [`oracles`], random instances in [`instancegen`], and
//! the experiment driver behind the `pdla` binary in [`harness`].
//!
//! ```
//! use pdla::skirental::{run_pdla_ski, SkiInstance, SkiPrediction};
//!
//! let inst = SkiInstance { n: 100, b: 100 };
//! let run = run_pdla_ski(&inst, &SkiPrediction { n_pred: 200 }, 1.0).unwrap();
//! // the classic e/(e-1) behaviour at the worst-case stopping day
//! assert!((run.cost() / 100.0 - 1.5866).abs() < 1e-3);
//! ```

pub mod bahncard;
pub mod common;
pub mod error;
pub mod harness;
pub mod instancegen;
pub mod lemmas;
pub mod oracles;
pub mod setcover;
pub mod skirental;
pub mod tcpack;

pub use error::{PdlaError, Result};
