//! JSON conventions: complex numbers are `[re, im]` pairs, matrices are
//! lists of rows, states use the flat-index file format
//! `{"dim_a": int, "dim_b": int, "amplitudes": [[re, im], ...]}`.

use std::path::Path;

use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::state::BipartiteState;

pub fn complex<S: Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

pub fn complex_vec<S: Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

pub fn matrix<S: Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<[f64; 2]>> =
        (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect();
    rows.serialize(s)
}

pub fn matrix_to_value(m: &CMatrix) -> serde_json::Value {
    matrix(m, serde_json::value::Serializer).expect("matrix serializes")
}

/// On-disk state representation.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dim_a: usize,
    pub dim_b: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(state: &BipartiteState) -> Self {
        Self {
            dim_a: state.dim_a(),
            dim_b: state.dim_b(),
            amplitudes: state.to_flat().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn into_state(self, normalize: bool) -> Result<BipartiteState> {
        if self.amplitudes.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let amps: Vec<C64> = self.amplitudes.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        BipartiteState::from_amplitudes(self.dim_a, self.dim_b, &amps, normalize)
    }
}

pub fn parse_state(text: &str, normalize: bool) -> Result<BipartiteState> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_state(normalize)
}

pub fn read_state(path: impl AsRef<Path>, normalize: bool) -> Result<BipartiteState> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_state(&text, normalize)
}

pub fn state_to_json(state: &BipartiteState) -> String {
    serde_json::to_string(&StateFile::from_state(state)).expect("state serializes")
}

pub fn write_state(path: impl AsRef<Path>, state: &BipartiteState) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, state_to_json(state)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::haar_random_state;

    #[test]
    fn parses_bell_file() {
        let h = 0.5f64.sqrt();
        let text = format!(r#"{{"dim_a": 2, "dim_b": 2, "amplitudes": [[{h}, 0], [0, 0], [0, 0], [{h}, 0.0]]}}"#);
        let s = parse_state(&text, false).unwrap();
        assert_eq!(s.dims(), (2, 2));
        assert!((s.amplitude(1, 1).re - h).abs() < 1e-16);
    }

    #[test]
    fn rejects_malformed_and_non_finite() {
        assert!(matches!(parse_state("{\"dim_a\": 2", false), Err(Error::Parse(_))));
        assert!(matches!(parse_state(r#"{"dim_a":1,"dim_b":1,"amplitudes":[[NaN,0]]}"#, false), Err(Error::Parse(_))));
        assert!(parse_state(r#"{"dim_a":1,"dim_b":1,"amplitudes":[[1e999,0]]}"#, false).is_err());
        assert!(matches!(
            parse_state(r#"{"dim_a":2,"dim_b":2,"amplitudes":[[1,0]]}"#, false),
            Err(Error::DimensionMismatch(_))
        ));
        let nonfinite = StateFile { dim_a: 1, dim_b: 1, amplitudes: vec![[f64::INFINITY, 0.0]] };
        assert!(matches!(nonfinite.into_state(true), Err(Error::NonFinite)));
    }

    #[test]
    fn round_trips_through_text() {
        let s = haar_random_state(3, 2, 11).unwrap();
        let back = parse_state(&state_to_json(&s), false).unwrap();
        assert_eq!(back, s);
    }
}
