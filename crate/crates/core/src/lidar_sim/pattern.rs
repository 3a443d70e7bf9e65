//! LiDAR beam patterns.

use nalgebra::Vector3;

use crate::error::{Error, Result};

/// Beam directions in the sensor frame plus the sensor's maximum range.
/// Beams are ordered ring-major (all azimuths of ring 0, then ring 1, ...).
#[derive(Debug, Clone)]
pub struct ScanPattern {
    pub beams: Vec<Vector3<f64>>,
    pub max_range: f64,
}

/// Spinning-LiDAR pattern: `rings` elevation lines uniformly spaced over
/// [elev_min, elev_max] (inclusive of both bounds) and `azimuth_steps`
/// uniform azimuths over [0, 360).
pub fn make_spinning_pattern(
    rings: usize,
    elev_min_deg: f64,
    elev_max_deg: f64,
    azimuth_steps: usize,
    max_range: f64,
) -> Result<ScanPattern> {
    if rings < 1 || azimuth_steps < 1 {
        return Err(Error::InvalidArgument(
            "rings and azimuth_steps must be >= 1".into(),
        ));
    }
    if elev_min_deg > elev_max_deg {
        return Err(Error::InvalidArgument(
            "elev_min must not exceed elev_max".into(),
        ));
    }
    if max_range <= 0.0 {
        return Err(Error::InvalidArgument("max_range must be positive".into()));
    }
    let mut beams = Vec::with_capacity(rings * azimuth_steps);
    for r in 0..rings {
        let elev_deg = if rings == 1 {
            (elev_min_deg + elev_max_deg) / 2.0
        } else {
            elev_min_deg + (elev_max_deg - elev_min_deg) * r as f64 / (rings - 1) as f64
        };
        let elev = elev_deg.to_radians();
        let (se, ce) = (elev.sin(), elev.cos());
        for a in 0..azimuth_steps {
            let az = 2.0 * std::f64::consts::PI * a as f64 / azimuth_steps as f64;
            beams.push(Vector3::new(ce * az.cos(), ce * az.sin(), se));
        }
    }
    Ok(ScanPattern { beams, max_range })
}
