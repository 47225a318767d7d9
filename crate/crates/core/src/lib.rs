//! Learnability analysis and PAC best-arm identification for finite bandit
//! function classes.
//!
//! A [`FunctionClass`] is a finite set of mean-reward vectors over a finite
//! set of arms. Its maximin volume [`gamma`](games::gamma) at accuracy `α`
//! measures how much probability a single sampling distribution can put on
//! `α`-optimal arms of every function simultaneously. The learners in
//! [`learners`] turn a positive volume into a PAC guarantee; the
//! [`dec`] module computes a decision-estimation coefficient that drives an
//! adaptive learner; and [`harness`] runs seeded Monte Carlo experiments.
//!
//! ```
//! use maximin_bandits::{environments::make_k_armed_surrogate, games::gamma};
//!
//! let class = make_k_armed_surrogate(4).unwrap();
//! let cert = gamma(&class, 0.5, 1e-9).unwrap();
//! assert!((cert.value - 0.25).abs() < 1e-9);
//! ```

pub mod class;
pub mod dec;
pub mod dist;
pub mod environments;
pub mod error;
pub mod estimators;
pub mod games;
pub mod harness;
pub mod learners;
pub mod noise;
pub mod transcript;

pub use class::{gap_matrix, FunctionClass, GapMatrix, Labels};
pub use dist::ArmDistribution;
pub use error::{Error, Result};
pub use games::{gamma, solve_maximin, GammaCertificate, MaximinSolution};
pub use learners::{LearnerName, LearnerParams, LearnerSpec};
pub use noise::{Model, NoiseSpec, RewardSource, Simulator};
pub use transcript::{QueryRecord, Transcript};
