//! JSON state-file schema: dims plus row-major amplitudes with factor 0
//! slowest.

use serde::{Deserialize, Serialize};

use crate::states::PureState;
use crate::{C64, CVector, Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: Vec<usize>,
    /// `[re, im]` pairs, row-major over the multi-index, factor 0 slowest.
    pub amplitudes: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unnormalized: bool,
}

impl StateFile {
    pub fn from_state(state: &PureState, label: Option<String>) -> Self {
        let norm = state.amplitudes().norm();
        StateFile {
            dims: state.dims().to_vec(),
            amplitudes: state.amplitudes().iter().map(|c| [c.re, c.im]).collect(),
            label,
            unnormalized: (norm - 1.0).abs() > 1e-6,
        }
    }

    pub fn to_state(&self) -> Result<PureState> {
        let total: usize = self.dims.iter().product();
        if self.amplitudes.len() != total {
            return Err(Error::InvalidInput(format!(
                "amplitude count {} does not match product of dims {} — fix the state file",
                self.amplitudes.len(),
                total
            )));
        }
        let amps = CVector::from_iterator(
            total,
            self.amplitudes.iter().map(|[re, im]| C64::new(*re, *im)),
        );
        if !amps.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::InvalidInput("state file contains non-finite amplitudes".into()));
        }
        if self.unnormalized {
            PureState::new_unnormalized(self.dims.clone(), amps)
        } else {
            let norm = amps.norm();
            if (norm - 1.0).abs() > 1e-6 {
                return Err(Error::InvalidInput(format!(
                    "state norm {norm:.9} is not 1; set \"unnormalized\": true to accept as-is"
                )));
            }
            PureState::new_unnormalized(self.dims.clone(), amps)
        }
    }
}

pub fn read_state(path: &std::path::Path) -> Result<PureState> {
    let text = std::fs::read_to_string(path)?;
    let file: StateFile = serde_json::from_str(&text)?;
    file.to_state()
}

pub fn write_state(path: &std::path::Path, state: &PureState, label: Option<String>) -> Result<()> {
    let file = StateFile::from_state(state, label);
    std::fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::StateSampler;

    #[test]
    fn round_trip_is_bit_exact() {
        let mut sampler = StateSampler::new(139);
        for _ in 0..20 {
            let psi = sampler.pure_state(&[2, 3]);
            let text = serde_json::to_string(&StateFile::from_state(&psi, None)).unwrap();
            let back: StateFile = serde_json::from_str(&text).unwrap();
            let restored = back.to_state().unwrap();
            assert_eq!(psi.amplitudes().as_slice(), restored.amplitudes().as_slice());
            assert_eq!(psi.dims(), restored.dims());
        }
    }

    #[test]
    fn wrong_length_rejected() {
        let file = StateFile {
            dims: vec![2, 2],
            amplitudes: vec![[1.0, 0.0]; 3],
            label: None,
            unnormalized: false,
        };
        assert!(file.to_state().is_err());
    }

    #[test]
    fn unnormalized_requires_flag() {
        let mut file = StateFile {
            dims: vec![2],
            amplitudes: vec![[2.0, 0.0], [0.0, 0.0]],
            label: None,
            unnormalized: false,
        };
        assert!(file.to_state().is_err());
        file.unnormalized = true;
        assert!(file.to_state().is_ok());
    }

    #[test]
    fn non_finite_rejected() {
        let file = StateFile {
            dims: vec![2],
            amplitudes: vec![[f64::NAN, 0.0], [0.0, 0.0]],
            label: None,
            unnormalized: true,
        };
        assert!(file.to_state().is_err());
    }
}
