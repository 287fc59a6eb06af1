//! Bloch representation of two-qudit operators in the tensor Gell-Mann
//! basis, sector lengths, and the split of a pure state into its
//! product-basis diagonal and offdiagonal parts.

mod expansion;
mod gell_mann;
mod scan;
mod sectors;

pub use expansion::{bloch_expand, BlochExpansion};
pub use gell_mann::{gell_mann_basis, HermitianBasis};
pub use scan::{extremal_scan, optimize_diag_2sector, scan_bases, write_scan_csv, OptimizeResult, ScanReport, ScanRow};
pub use sectors::{
    concurrence_sq, diag_2sector_fast, diag_offdiag_split, max_nondiagonal_one_sector, projector_expansion,
    schmidt_basis_contributions, sector_contributions, sector_contributions_with, sector_lengths, split_norms,
    to_schmidt_basis, SectorLengths, SectorReport, UNITS,
};
