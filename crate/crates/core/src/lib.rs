//! Numerical Lie sphere geometry for Dupin hypersurfaces.
//!
//! Hypersurface patches in `R^n` or `S^n` are lifted to Legendre maps into the
//! Lie quadric of `R^{n+3}` with the form `diag(−1, 1, …, 1, −1)`. From the lift
//! the crate computes principal curvatures, curvature spheres, Dupin residuals
//! and the Lie curvature, builds new examples by revolution, tubes and
//! cylinders, and classifies sampled curvature sphere maps: reducibility and
//! construction type, the isoparametric witness pair and immersing Lie
//! transformations.
//!
//! ```
//! use lsk::analysis::{analyze, InputDescriptor, Settings, Subject};
//! use lsk::corpus::ParamMap;
//! use lsk::patch::Grid;
//!
//! let params = ParamMap::new().with("R", 2.0).with("a", 0.5);
//! let torus = Subject::build(InputDescriptor::named("torus", params)).unwrap();
//! let settings = Settings { grid: Some(Grid::uniform(2, 16)), ..Settings::default() };
//! let report = analyze(&torus, &settings).unwrap();
//! assert_eq!(report.curvature.g, 2);
//! assert!(report.curvature.dupin.unwrap().is_dupin);
//! ```

pub mod error;
pub mod linalg;
pub mod patch;
pub mod quadric;
pub mod lift;
pub mod curvature;
pub mod constructions;
pub mod classify;
pub mod corpus;
pub mod report;
pub mod analysis;
pub mod corpus_file;
pub mod cli;

pub use error::{Error, Result};
pub use linalg::{inner, LieTransform, LorentzVector, Signature, SubspaceBasis};
pub use patch::{Ambient, Domain, Grid, HypersurfacePatch, PatchRef};
pub use quadric::{ProjectivePair, QuadricPoint};
