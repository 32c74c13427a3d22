pub mod algebra;
pub mod corpus;
pub mod diagram;
pub mod error;
pub mod khovanov;
pub mod moduli;
pub mod skein;
pub mod selfcheck;
pub mod transverse;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/diagrams.md")]
    mod diagrams {}
    #[doc = include_str!("../../../book/src/skein.md")]
    mod skein {}
    #[doc = include_str!("../../../book/src/khovanov.md")]
    mod khovanov {}
    #[doc = include_str!("../../../book/src/transverse.md")]
    mod transverse {}
    #[doc = include_str!("../../../book/src/moduli.md")]
    mod moduli {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
