use core::ops::Mul;

#[allow(unused_imports)]
use num_traits::Float;

use super::AnalyticsError;
use crate::scene::WorldPoint;

/// Samples further apart than this are flagged in [`AggregateInteraction`].
pub const GAP_WARNING_SECONDS: f64 = 0.5;
pub const UNIT_TOLERANCE: f64 = 1e-6;

/// Rotation quaternion, scalar first.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quat {
    pub const IDENTITY: Quat = Quat { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    /// Rotation by `degrees` about `axis` (need not be normalised).
    pub fn from_axis_angle(axis: [f64; 3], degrees: f64) -> Self {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let half = degrees.to_radians() / 2.0;
        let s = half.sin() / n;
        Self { w: half.cos(), x: axis[0] * s, y: axis[1] * s, z: axis[2] * s }
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, o: &Quat) -> f64 {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn is_unit(&self) -> bool {
        (self.norm() - 1.0).abs() <= UNIT_TOLERANCE
    }

    /// Geodesic angle between the two rotations, degrees.
    ///
    /// Equal to 2·acos|q₁·q₂| but computed as an atan2 of chord lengths so
    /// small angles keep full precision.
    pub fn angle_to(&self, o: &Quat) -> f64 {
        let o = if self.dot(o) < 0.0 { Quat::new(-o.w, -o.x, -o.y, -o.z) } else { *o };
        let diff = Quat::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z).norm();
        let sum = Quat::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z).norm();
        (4.0 * diff.atan2(sum)).to_degrees()
    }
}

impl Mul for Quat {
    type Output = Quat;

    fn mul(self, o: Quat) -> Quat {
        Quat {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            y: self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            z: self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        }
    }
}

/// One tracked frame of head and controller pose.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PoseSample {
    pub t: f64,
    pub head_pos: WorldPoint,
    pub head_rot: Quat,
    pub controller_pos: WorldPoint,
    pub controller_rot: Quat,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AggregateInteraction {
    pub head_move_m: f64,
    pub controller_move_m: f64,
    pub head_rot_deg: f64,
    pub controller_rot_deg: f64,
    /// Consecutive samples more than [`GAP_WARNING_SECONDS`] apart.
    pub gap_warnings: usize,
}

impl AggregateInteraction {
    /// Sum of two aggregates, e.g. of consecutive log segments.
    pub fn combine(&self, o: &AggregateInteraction) -> AggregateInteraction {
        AggregateInteraction {
            head_move_m: self.head_move_m + o.head_move_m,
            controller_move_m: self.controller_move_m + o.controller_move_m,
            head_rot_deg: self.head_rot_deg + o.head_rot_deg,
            controller_rot_deg: self.controller_rot_deg + o.controller_rot_deg,
            gap_warnings: self.gap_warnings + o.gap_warnings,
        }
    }
}

/// Path length and accumulated rotation of head and controller.
pub fn aggregate(log: &[PoseSample]) -> Result<AggregateInteraction, AnalyticsError> {
    let first = log.first().ok_or(AnalyticsError::EmptyLog)?;
    let mut out = AggregateInteraction::default();
    let mut prev = first;
    check_sample(0, first)?;
    for (i, s) in log.iter().enumerate().skip(1) {
        check_sample(i, s)?;
        if s.t < prev.t {
            return Err(AnalyticsError::TimeReversed { index: i });
        }
        if s.t - prev.t > GAP_WARNING_SECONDS {
            out.gap_warnings += 1;
        }
        out.head_move_m += prev.head_pos.distance(&s.head_pos);
        out.controller_move_m += prev.controller_pos.distance(&s.controller_pos);
        out.head_rot_deg += prev.head_rot.angle_to(&s.head_rot);
        out.controller_rot_deg += prev.controller_rot.angle_to(&s.controller_rot);
        prev = s;
    }
    Ok(out)
}

fn check_sample(index: usize, s: &PoseSample) -> Result<(), AnalyticsError> {
    if !(s.head_rot.is_unit() && s.controller_rot.is_unit()) {
        return Err(AnalyticsError::NonUnitQuaternion { index });
    }
    if !s.t.is_finite() {
        return Err(AnalyticsError::NonFinite);
    }
    Ok(())
}
