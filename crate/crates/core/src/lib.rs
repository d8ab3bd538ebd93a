//! Biplane incidence matrices, partially balanced designs with three associate
//! classes, and their association schemes.
//!
//! The central construction takes a symmetric biplane incidence matrix in
//! canonical form with all ones on the diagonal and cuts out the principal
//! submatrix on rows and columns `k+1..3k-6` (0-based). That `2k-6` square
//! core is a symmetric design with block size 3 whose point pairs fall into
//! three concurrence classes.

pub mod binmat;
pub mod biplane;
pub mod error;
pub mod extract;
pub mod fixtures;
pub mod incidence;
pub mod pbibd;
pub mod scheme;
pub mod search;

pub use binmat::{
    find_relabeling, is_perm_equivalent, parse_int_matrices, parse_matrices, BinaryMatrix, IndexSet, IntMatrix,
    Permutation,
};
pub use biplane::{assemble_b4c, canonical_head, has_canonical_form, verify_biplane, BiplaneCertificate};
pub use error::{Error, ErrorKind, Result};
pub use extract::{check_lemma1, check_lemma2, extract_design, extraction_indices, family_generate, ExtractionReport};
pub use incidence::{DesignParameters, IdentityReport, IncidenceStructure};
pub use pbibd::{classify, concurrence, verify_pbibd, PairClassification, PbibdReport};
pub use scheme::{AssociationScheme, BoseMesnerReport, SchemeReport};
pub use search::{search_symmetric_canonical, PruneRule, SearchConfig, SearchOutcome};
