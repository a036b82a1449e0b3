//! Numerical verification: error-magnitude scans, log-log order fits,
//! finite-difference series coefficients, the xy error-axis search and the
//! infidelity table.

mod axis;
mod fit;
mod scan;
mod series;
mod table1;

pub use axis::{pm_fidelity_error, xy_error_axis, XyAxis};
pub use fit::{fit_order, fit_power_law, OrderFit, MIN_FIT_POINTS};
pub use scan::{component_scan, Column, Grid, ScanResult, ScanRow};
pub use series::{series_coefficient, Family, MultiIndex, Param, MIN_SERIES_DIGITS};
pub use table1::{table1, table1_cell, Table1, TABLE1_COLUMNS, TABLE1_EPS, TABLE1_REFERENCE};
