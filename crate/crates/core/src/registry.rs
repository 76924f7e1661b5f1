//! Lookup of problems by versioned identifier, e.g. `"beams2d/v0"`.
//! A leading `"problems/"` is accepted and ignored.

use alloc::boxed::Box;
use alloc::string::ToString;

use crate::circuits::PowerElectronics;
use crate::photonics::Photonics2D;
use crate::problem::Problem;
use crate::topopt::{Beams2D, HeatConduction2D, ThermoElasticBeams2D};
use crate::{Error, Result};

/// Every registered identifier.
pub const PROBLEM_IDS: &[&str] =
    &["beams2d/v0", "heatconduction2d/v0", "thermoelasticbeams2d/v0", "photonics2d/v0", "powerelectronics/v0"];

/// Canonical form of `id`, if registered.
pub fn canonical_id(id: &str) -> Option<&'static str> {
    let id = id.trim();
    let id = id.strip_prefix("problems/").unwrap_or(id);
    PROBLEM_IDS.iter().copied().find(|&p| p.eq_ignore_ascii_case(id))
}

/// Builds a problem at its default size.
pub fn make(id: &str) -> Result<Box<dyn Problem>> {
    make_sized(id, None)
}

/// Builds a problem with an explicit grid size `(nelx, nely)`. Square-grid
/// problems use `nelx`; problems without a grid reject a size.
pub fn make_sized(id: &str, size: Option<(usize, usize)>) -> Result<Box<dyn Problem>> {
    let canonical = canonical_id(id).ok_or_else(|| Error::UnknownProblem(id.to_string()))?;
    if let Some((nx, ny)) = size {
        if nx == 0 || ny == 0 {
            return Err(Error::invalid("grid dimensions must be positive"));
        }
    }
    Ok(match (canonical, size) {
        ("beams2d/v0", None) => Box::new(Beams2D::default()),
        ("beams2d/v0", Some((nx, ny))) => Box::new(Beams2D::new(nx, ny)),
        ("heatconduction2d/v0", None) => Box::new(HeatConduction2D::default()),
        ("heatconduction2d/v0", Some((n, _))) => Box::new(HeatConduction2D::new(n)),
        ("thermoelasticbeams2d/v0", None) => Box::new(ThermoElasticBeams2D::default()),
        ("thermoelasticbeams2d/v0", Some((nx, ny))) => Box::new(ThermoElasticBeams2D::new(nx, ny)),
        ("photonics2d/v0", None) => Box::new(Photonics2D::default()),
        ("photonics2d/v0", Some((nx, ny))) => Box::new(Photonics2D::new(nx, ny)),
        ("powerelectronics/v0", None) => Box::new(PowerElectronics::default()),
        ("powerelectronics/v0", Some(_)) => {
            return Err(Error::invalid("powerelectronics/v0 has no grid size"));
        }
        _ => unreachable!("every registered id has a constructor"),
    })
}
