//! Binary checkpoints.
//!
//! Layout, little-endian throughout:
//!
//! | bytes | content |
//! |---|---|
//! | 4 | magic `PKNS` |
//! | 1 | version `0x01` |
//! | 1 | mode tag: 0 torus, 1 radial, 2 selfsim |
//! | 8 | time (`f64`; τ for selfsim) |
//! | 8 per axis | dims (`u64`): torus `n, n`; radial and selfsim `n_r` |
//! | 8 | radial and selfsim only: `r_max` (`f64`) |
//! | rest | arrays of `f64`, row-major: torus `n, u¹, u²`; radial `n, ω` |
//!
//! Torus fields are stored as physical samples; loading transforms them back
//! to coefficients, so a state survives the round trip up to FFT rounding
//! while the file itself round-trips bit for bit.

use std::path::Path;

use pkns_core::config::{GridSpec, Mode};
use pkns_core::radial::RadialGrid;
use pkns_core::spectral::{SpectralScalar, SpectralVector, TorusGrid};
use pkns_core::{RadialState64, SelfSimState64, TorusState64};

use crate::error::{FormatError, HarnessError};

pub const MAGIC: [u8; 4] = *b"PKNS";
pub const VERSION: u8 = 0x01;

#[derive(Debug, Clone, PartialEq)]
pub enum Checkpoint {
    Torus {
        t: f64,
        n_points: usize,
        n: Vec<f64>,
        u1: Vec<f64>,
        u2: Vec<f64>,
    },
    Radial {
        t: f64,
        r_max: f64,
        n: Vec<f64>,
        omega: Vec<f64>,
    },
    SelfSim {
        tau: f64,
        r_max: f64,
        n: Vec<f64>,
        omega: Vec<f64>,
    },
}

fn mode_tag(mode: Mode) -> u8 {
    match mode {
        Mode::Torus => 0,
        Mode::Radial => 1,
        Mode::SelfSim => 2,
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8], FormatError> {
        let end = self
            .pos
            .checked_add(len)
            .filter(|&e| e <= self.buf.len())
            .ok_or(FormatError::Truncated {
                needed: self.pos.saturating_add(len),
                available: self.buf.len(),
            })?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8, FormatError> {
        Ok(self.take(1)?[0])
    }

    fn u64(&mut self) -> Result<u64, FormatError> {
        Ok(u64::from_le_bytes(
            self.take(8)?.try_into().expect("eight bytes"),
        ))
    }

    fn f64(&mut self) -> Result<f64, FormatError> {
        Ok(f64::from_le_bytes(
            self.take(8)?.try_into().expect("eight bytes"),
        ))
    }

    fn dim(&mut self) -> Result<usize, FormatError> {
        let d = self.u64()?;
        usize::try_from(d).map_err(|_| {
            FormatError::DimensionMismatch(format!("dimension {d} does not fit in memory"))
        })
    }

    /// Reads `count` arrays of `len` values each, checking the size up front
    /// so corrupt dims cannot trigger huge allocations.
    fn arrays(&mut self, count: usize, len: usize) -> Result<Vec<Vec<f64>>, FormatError> {
        let needed = len
            .checked_mul(8 * count)
            .and_then(|b| b.checked_add(self.pos))
            .unwrap_or(usize::MAX);
        if needed > self.buf.len() {
            return Err(FormatError::Truncated {
                needed,
                available: self.buf.len(),
            });
        }
        (0..count)
            .map(|_| (0..len).map(|_| self.f64()).collect())
            .collect()
    }
}

impl Checkpoint {
    pub fn mode(&self) -> Mode {
        match self {
            Checkpoint::Torus { .. } => Mode::Torus,
            Checkpoint::Radial { .. } => Mode::Radial,
            Checkpoint::SelfSim { .. } => Mode::SelfSim,
        }
    }

    /// Physical time, or τ for self-similar checkpoints.
    pub fn time(&self) -> f64 {
        match self {
            Checkpoint::Torus { t, .. } | Checkpoint::Radial { t, .. } => *t,
            Checkpoint::SelfSim { tau, .. } => *tau,
        }
    }

    /// Points per axis on the torus, cells on the half line.
    pub fn dims(&self) -> Vec<usize> {
        match self {
            Checkpoint::Torus { n_points, .. } => vec![*n_points, *n_points],
            Checkpoint::Radial { n, .. } | Checkpoint::SelfSim { n, .. } => vec![n.len()],
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.push(mode_tag(self.mode()));
        out.extend_from_slice(&self.time().to_le_bytes());
        for d in self.dims() {
            out.extend_from_slice(&(d as u64).to_le_bytes());
        }
        let arrays: Vec<&Vec<f64>> = match self {
            Checkpoint::Torus { n, u1, u2, .. } => vec![n, u1, u2],
            Checkpoint::Radial {
                r_max, n, omega, ..
            }
            | Checkpoint::SelfSim {
                r_max, n, omega, ..
            } => {
                out.extend_from_slice(&r_max.to_le_bytes());
                vec![n, omega]
            }
        };
        for a in arrays {
            for v in a {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(buf: &[u8]) -> Result<Self, FormatError> {
        let mut r = Reader { buf, pos: 0 };
        let magic: [u8; 4] = r.take(4)?.try_into().expect("four bytes");
        if magic != MAGIC {
            return Err(FormatError::BadMagic(magic));
        }
        let version = r.u8()?;
        if version != VERSION {
            return Err(FormatError::BadVersion(version));
        }
        let tag = r.u8()?;
        let time = r.f64()?;
        let ckpt = match tag {
            0 => {
                let (d1, d2) = (r.dim()?, r.dim()?);
                if d1 != d2 {
                    return Err(FormatError::DimensionMismatch(format!(
                        "torus grid must be square, got {d1}x{d2}"
                    )));
                }
                let len = d1.checked_mul(d2).ok_or_else(|| {
                    FormatError::DimensionMismatch(format!(
                        "torus grid {d1}x{d2} does not fit in memory"
                    ))
                })?;
                let mut a = r.arrays(3, len)?.into_iter();
                Checkpoint::Torus {
                    t: time,
                    n_points: d1,
                    n: a.next().expect("three arrays"),
                    u1: a.next().expect("three arrays"),
                    u2: a.next().expect("three arrays"),
                }
            }
            1 | 2 => {
                let n_r = r.dim()?;
                let r_max = r.f64()?;
                let mut a = r.arrays(2, n_r)?.into_iter();
                let (n, omega) = (a.next().expect("two arrays"), a.next().expect("two arrays"));
                if tag == 1 {
                    Checkpoint::Radial {
                        t: time,
                        r_max,
                        n,
                        omega,
                    }
                } else {
                    Checkpoint::SelfSim {
                        tau: time,
                        r_max,
                        n,
                        omega,
                    }
                }
            }
            other => return Err(FormatError::BadMode(other)),
        };
        if r.pos != buf.len() {
            return Err(FormatError::TrailingBytes(buf.len() - r.pos));
        }
        Ok(ckpt)
    }

    pub fn save(&self, path: &Path) -> Result<(), HarnessError> {
        std::fs::write(path, self.to_bytes()).map_err(|e| HarnessError::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let bytes = std::fs::read(path).map_err(|e| HarnessError::io(path, e))?;
        Ok(Self::from_bytes(&bytes)?)
    }

    pub fn of_torus(state: &TorusState64) -> Self {
        let (u1, u2) = state.u.to_physical();
        Checkpoint::Torus {
            t: state.t,
            n_points: state.grid().n_points(),
            n: state.n.to_physical(),
            u1,
            u2,
        }
    }

    pub fn of_radial(state: &RadialState64) -> Self {
        Checkpoint::Radial {
            t: state.t,
            r_max: state.grid.r_max(),
            n: state.n.clone(),
            omega: state.omega.clone(),
        }
    }

    pub fn of_selfsim(state: &SelfSimState64) -> Self {
        Checkpoint::SelfSim {
            tau: state.tau,
            r_max: state.grid.r_max(),
            n: state.n.clone(),
            omega: state.omega.clone(),
        }
    }

    /// Errors unless the stored grid is exactly `grid`; there is no resampling.
    pub fn check_grid(&self, grid: &GridSpec<f64>) -> Result<(), FormatError> {
        match (self, grid) {
            (Checkpoint::Torus { n_points, .. }, GridSpec::Torus { n_points: want })
                if n_points == want =>
            {
                Ok(())
            }
            (
                Checkpoint::Radial { r_max, n, .. } | Checkpoint::SelfSim { r_max, n, .. },
                GridSpec::Radial { r_max: want_r, n_r },
            ) if n.len() == *n_r && r_max == want_r => Ok(()),
            _ => Err(FormatError::DimensionMismatch(format!(
                "checkpoint grid {:?} does not match configured grid {grid:?}",
                self.dims()
            ))),
        }
    }

    pub fn to_torus(&self) -> Result<TorusState64, FormatError> {
        let Checkpoint::Torus {
            t,
            n_points,
            n,
            u1,
            u2,
        } = self
        else {
            return Err(self.wrong_mode(Mode::Torus));
        };
        let grid = TorusGrid::new(*n_points).map_err(invalid)?;
        let u = SpectralVector::new(
            SpectralScalar::from_physical(&grid, u1),
            SpectralScalar::from_physical(&grid, u2),
        );
        TorusState64::new(*t, SpectralScalar::from_physical(&grid, n), u).map_err(invalid)
    }

    pub fn to_radial(&self) -> Result<RadialState64, FormatError> {
        let Checkpoint::Radial { t, r_max, n, omega } = self else {
            return Err(self.wrong_mode(Mode::Radial));
        };
        let grid = RadialGrid::new(*r_max, n.len()).map_err(invalid)?;
        RadialState64::new(grid, *t, n.clone(), omega.clone()).map_err(invalid)
    }

    pub fn to_selfsim(&self) -> Result<SelfSimState64, FormatError> {
        let Checkpoint::SelfSim {
            tau,
            r_max,
            n,
            omega,
        } = self
        else {
            return Err(self.wrong_mode(Mode::SelfSim));
        };
        let grid = RadialGrid::new(*r_max, n.len()).map_err(invalid)?;
        SelfSimState64::new(grid, *tau, n.clone(), omega.clone()).map_err(invalid)
    }

    fn wrong_mode(&self, want: Mode) -> FormatError {
        FormatError::InvalidState(format!(
            "checkpoint holds a {} state, expected {}",
            self.mode().as_str(),
            want.as_str()
        ))
    }
}

fn invalid(e: pkns_core::Error) -> FormatError {
    FormatError::InvalidState(e.to_string())
}
