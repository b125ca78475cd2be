use serde::Serialize;

use crate::error::Result;
use crate::quadfield::{LocalType, PlaceId, QuadField};

/// Classical and logarithmic ramification data at a place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LogLocalData {
    pub place: PlaceId,
    pub e: u32,
    pub f: u32,
    pub e_tilde: u32,
    pub f_tilde: u32,
}

/// Logarithmic ramification at the places above `q`.
///
/// Over `Q_q` the cyclotomic `Ẑ`-extension has Galois group `Ẑ × Z_q`. For odd
/// `q` its only quadratic subfield is unramified; for `q = 2` the quadratic
/// subfields are `Q₂(√5)`, `Q₂(√2)` and `Q₂(√10)`.
pub fn log_inertia(field: &QuadField, q: u64, _ell: u64) -> Result<Vec<LogLocalData>> {
    let places = field.split_prime(q)?;
    Ok(places
        .into_iter()
        .map(|place| {
            let (e, f) = (place.ramification(), place.residue_degree());
            let kind = place.kind().unwrap_or(LocalType::Rational);
            let (e_tilde, f_tilde) = match kind {
                LocalType::Rational | LocalType::Split => (1, 1),
                _ if q != 2 => (e, f),
                _ => {
                    if in_cyclotomic_part(field.d().expect("quadratic")) {
                        (1, 2)
                    } else {
                        (2, 1)
                    }
                }
            };
            LogLocalData { place, e, f, e_tilde, f_tilde }
        })
        .collect())
}

/// Whether `Q₂(√d)` lies in the cyclotomic `Ẑ`-extension of `Q₂`, i.e. the
/// class of `d` in `Q₂^×/Q₂^×²` is one of 2, 5, 10.
fn in_cyclotomic_part(d: i64) -> bool {
    let e = d.trailing_zeros() % 2;
    let u = (d >> d.trailing_zeros()).rem_euclid(8);
    matches!((e, u), (1, 1) | (0, 5) | (1, 5))
}
