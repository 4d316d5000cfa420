use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::tiling::{Sector, TangentFan};
use crate::{Error, Result, Vec2};

const CLASSIFY_TOL: f64 = 1e-12;

/// Position of a tangent cone relative to the half-planes cut by the
/// tangent line of a hypersurface `Σ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SimplexType {
    /// The cone meets the open outer side `H_−`.
    Crossing = 1,
    /// The cone lies in the closed inner side and touches `H_0` along a ray.
    Touching = 2,
    /// The cone lies in the open inner side `H_+` (apart from the apex).
    Inner = 3,
}

impl SimplexType {
    pub fn number(self) -> u8 {
        self as u8
    }
}

/// Classifies one sector against the line spanned by `tangent`, with `H_+`
/// the side containing `inward`.
pub fn classify_sector(sector: &Sector, tangent: &Vec2, inward: &Vec2) -> Result<SimplexType> {
    if sector.width() <= CLASSIFY_TOL {
        return Err(Error::DegenerateCone);
    }
    let cross = tangent[0] * inward[1] - tangent[1] * inward[0];
    if cross == 0.0 {
        return Err(Error::invalid(
            "inward direction is parallel to the tangent line",
        ));
    }
    let t = if cross > 0.0 { *tangent } else { -tangent };
    // Rotate so H_+ is the open angular interval (0, π).
    let mut b1 = (sector.start - t[1].atan2(t[0])).rem_euclid(TAU);
    if b1 > TAU - CLASSIFY_TOL {
        b1 -= TAU;
    }
    let b2 = b1 + sector.width();
    if b1 > CLASSIFY_TOL && b2 < PI - CLASSIFY_TOL {
        Ok(SimplexType::Inner)
    } else if b1 >= -CLASSIFY_TOL && b2 <= PI + CLASSIFY_TOL {
        Ok(SimplexType::Touching)
    } else {
        Ok(SimplexType::Crossing)
    }
}

/// Classifies the sector swept counterclockwise from `from` to `to`.
pub fn classify_sector_vectors(
    from: &Vec2,
    to: &Vec2,
    tangent: &Vec2,
    inward: &Vec2,
) -> Result<SimplexType> {
    classify_sector(&Sector::from_vectors(from, to, 0.0), tangent, inward)
}

/// Types of every triangle incident to the fan's base point.
pub fn classify_simplex_types(
    fan: &TangentFan,
    tangent: &Vec2,
    inward: &Vec2,
) -> Result<Vec<(Option<usize>, SimplexType)>> {
    fan.sectors
        .iter()
        .map(|s| Ok((s.triangle, classify_sector(s, tangent, inward)?)))
        .collect()
}
