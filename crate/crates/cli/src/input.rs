use std::str::FromStr;

use gmclone::qubit::Qubit;
use gmclone::C64;

/// `basis:0` | `basis:1` | `equatorial:PHI` | `amps:RE,IM,RE,IM`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InputSpec {
    Basis(bool),
    Equatorial(f64),
    Amplitudes(Qubit),
}

impl InputSpec {
    pub fn qubit(&self) -> Qubit {
        match *self {
            InputSpec::Basis(bit) => Qubit::basis(bit),
            InputSpec::Equatorial(phi) => Qubit::equatorial(phi),
            InputSpec::Amplitudes(q) => q,
        }
    }

    pub fn basis_bit(&self) -> Option<bool> {
        match *self {
            InputSpec::Basis(bit) => Some(bit),
            _ => None,
        }
    }
}

fn number(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("{s:?} is not a finite number"))
}

impl FromStr for InputSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| format!("{s:?}: expected basis:B, equatorial:PHI or amps:RE,IM,RE,IM"))?;
        match kind {
            "basis" => match arg {
                "0" => Ok(InputSpec::Basis(false)),
                "1" => Ok(InputSpec::Basis(true)),
                _ => Err(format!("basis state must be 0 or 1, got {arg:?}")),
            },
            "equatorial" => Ok(InputSpec::Equatorial(number(arg)?)),
            "amps" => {
                let v = arg.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
                if v.len() != 4 {
                    return Err(format!("amps takes 4 numbers, got {}", v.len()));
                }
                Qubit::new(C64::new(v[0], v[1]), C64::new(v[2], v[3]))
                    .map(InputSpec::Amplitudes)
                    .map_err(|e| e.to_string())
            }
            _ => Err(format!("unknown input kind {kind:?}")),
        }
    }
}
