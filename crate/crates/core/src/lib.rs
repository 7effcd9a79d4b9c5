pub mod cli;
pub mod cosets;
pub mod groups;
pub mod homs;
pub mod permstruct;
pub mod presentations;
pub mod words;

// Runs the guide's code blocks as doctests.
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/words.md")]
mod book_words {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/presentations.md")]
mod book_presentations {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/homomorphisms.md")]
mod book_homomorphisms {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cosets.md")]
mod book_cosets {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/permgroups.md")]
mod book_permgroups {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
