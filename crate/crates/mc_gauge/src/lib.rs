//! Maurer–Cartan elements, exponential group elements multiplied by the
//! Campbell–Baker–Hausdorff series, and gauge transport along inner and
//! outer actions, all at finite truncation with exact arithmetic.

mod bch;
mod error;
mod gauge;
mod mc;

pub use bch::{ad_nilpotency, bch, bch_series, dynkin_coefficients, GroupElement, MAX_CLASS};
pub use error::GaugeError;
pub use gauge::{gauge_act, gauge_series, orbit_partition, outer_gauge_act, OrbitPartition};
pub use mc::{is_mc, McElement, McVerdict};
