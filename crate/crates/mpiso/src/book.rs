//! Doc-tests for the guide: every fenced Rust block in the book chapters
//! runs under `cargo test --doc`, keeping the prose honest.

#[doc = include_str!("../../../book/src/introduction.md")]
pub struct IntroductionChapter;

#[doc = include_str!("../../../book/src/graphs.md")]
pub struct GraphsChapter;

#[doc = include_str!("../../../book/src/canonical.md")]
pub struct CanonicalChapter;

#[doc = include_str!("../../../book/src/constants.md")]
pub struct ConstantsChapter;

#[doc = include_str!("../../../book/src/patterns.md")]
pub struct PatternsChapter;

#[doc = include_str!("../../../book/src/fingerprints.md")]
pub struct FingerprintsChapter;

#[doc = include_str!("../../../book/src/matching.md")]
pub struct MatchingChapter;

#[doc = include_str!("../../../book/src/automorphisms.md")]
pub struct AutomorphismsChapter;

#[doc = include_str!("../../../book/src/oracle.md")]
pub struct OracleChapter;

#[doc = include_str!("../../../book/src/cli.md")]
pub struct CliChapter;
