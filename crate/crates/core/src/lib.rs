//! Reversible data hiding in baseline JPEG files.
//!
//! Payload bits are embedded by histogram shifting of the quantized AC
//! coefficients of luminance blocks. Which blocks carry data is chosen by
//! a selector that trades expected spatial distortion against expected
//! growth of the entropy-coded stream; the selection itself travels inside
//! the stego file so that extraction needs only the stego JPEG and returns
//! the cover coefficients exactly.
//!
//! ```no_run
//! use jpeg_rdh::{embed, jpeg};
//!
//! let cover = jpeg::parse_jpeg(&std::fs::read("cover.jpg")?)?;
//! let payload = vec![true, false, true, true];
//! let options = embed::EmbedOptions::default();
//! let outcome = embed::plan_and_embed(&cover, &payload, &options)?;
//! std::fs::write("stego.jpg", jpeg::serialize_jpeg(&outcome.stego)?)?;
//!
//! let (bits, restored) = embed::extract(&outcome.stego)?;
//! assert_eq!(bits, payload);
//! assert!(restored.same_coefficients(&cover));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod cli;
pub mod cost;
pub mod embed;
pub mod error;
pub mod jpeg;
pub mod report;
pub mod select;
pub mod transform;

pub use error::{Error, Result};
