pub mod error;
pub mod examples;
pub mod field;
pub mod calibrate;
pub mod checks;
pub mod curvature;
pub mod forms;
pub mod genalg;
pub mod gk_pairs;
pub mod lemmas;
pub mod linalg;
pub mod moment;
pub mod sample;
pub mod scene;
pub mod spinor_gcs;
pub mod symexpr;

pub use error::{GkError, GkResult};
pub use field::{Diff, Field, Jet};
pub use forms::{Chart, Form};
pub use genalg::{BiVec, GenVec, TriVec};
pub use linalg::Mat;
pub use symexpr::ScalarExpr;
