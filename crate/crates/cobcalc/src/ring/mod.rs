//! Exact sparse truncated power-series arithmetic over pluggable
//! coefficient rings.

mod coeff;
mod json;
mod series;
mod text;

pub use coeff::{Coeff, CoeffError, CoeffRing, RingKind};
pub use json::{series_from_json, series_to_json, JsonError, RingJson, SeriesJson};
pub use series::{ExpVec, Series, SeriesError, Vars};
pub use text::{parse_series, ParseError};
