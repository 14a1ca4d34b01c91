//! Mass-mobility kinematics and the zone-transition counter MAR elects on.
//!
//! Speed and heading change only at scheduled update instants and then by a
//! Gaussian perturbation, so nodes never start, stop, or turn abruptly
//! between updates. The field boundary reflects specularly.

use std::f64::consts::{PI, TAU};

use crate::config::MobilityParams;
use crate::geometry::{FieldGeometry, Vec2, ZoneGrid, ZoneId};
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub position: Vec2,
    /// Radians in `[0, 2pi)`.
    pub heading: f64,
    pub speed: f64,
    /// Simulation time (s) of the next speed/heading redraw.
    pub next_update_at: f64,
    /// `(heading, sin, cos)` from the last step.
    pub(crate) trig: Option<(f64, f64, f64)>,
}

impl Kinematics {
    pub fn stationary(position: Vec2) -> Self {
        Self {
            position,
            heading: 0.0,
            speed: 0.0,
            next_update_at: f64::INFINITY,
            trig: None,
        }
    }
}

pub fn normalize_heading(h: f64) -> f64 {
    let r = h.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Advances `kin` from time `now` to `now + dt`.
pub fn step(
    kin: Kinematics,
    now: f64,
    dt: f64,
    params: &MobilityParams,
    field: &FieldGeometry,
    rng: &mut RandomStream,
) -> Kinematics {
    debug_assert!(dt > 0.0);
    let mut k = kin;
    if now >= k.next_update_at {
        k.speed = rng
            .gaussian(params.mean_speed, params.speed_stddev)
            .max(0.0);
        k.heading = normalize_heading(k.heading + rng.gaussian(0.0, params.turn_stddev));
        while k.next_update_at <= now {
            k.next_update_at += params.update_interval;
        }
    }
    if k.speed > 0.0 {
        let (sin, cos) = match k.trig {
            Some((h, s, c)) if h == k.heading => (s, c),
            _ => {
                let (s, c) = k.heading.sin_cos();
                k.trig = Some((k.heading, s, c));
                (s, c)
            }
        };
        let moved = Vec2::new(
            k.position.x + k.speed * dt * cos,
            k.position.y + k.speed * dt * sin,
        );
        let (pos, heading) = reflect(moved, k.heading, field);
        k.position = pos;
        k.heading = heading;
    }
    k
}

/// Specular reflection off the field walls, repeated until the point is
/// inside. The heading component normal to each violated wall is negated.
pub fn reflect(pos: Vec2, heading: f64, field: &FieldGeometry) -> (Vec2, f64) {
    if field.contains(pos) {
        return (pos, heading);
    }
    let (mut x, mut y, mut h) = (pos.x, pos.y, heading);
    for _ in 0..64 {
        let mut changed = false;
        if x > field.width {
            x = 2.0 * field.width - x;
            h = PI - h;
            changed = true;
        } else if x < 0.0 {
            x = -x;
            h = PI - h;
            changed = true;
        }
        if y > field.height {
            y = 2.0 * field.height - y;
            h = -h;
            changed = true;
        } else if y < 0.0 {
            y = -y;
            h = -h;
            changed = true;
        }
        if !changed {
            break;
        }
    }
    // Overshoots many field widths long are not physical; fold them in.
    x = x.clamp(0.0, field.width);
    y = y.clamp(0.0, field.height);
    (Vec2::new(x, y), normalize_heading(h))
}

/// Cumulative count of zone changes since the trial started.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MobilityFactor {
    pub count: u64,
    pub last_zone: ZoneId,
}

impl MobilityFactor {
    pub fn new(zone: ZoneId) -> Self {
        Self {
            count: 0,
            last_zone: zone,
        }
    }
}

/// Compares the zone once per tick: crossing two boundaries in one tick
/// counts as a single transition.
pub fn update_mobility_factor(
    mf: MobilityFactor,
    new_pos: Vec2,
    grid: &ZoneGrid,
) -> MobilityFactor {
    let zone = grid.zone_of_unchecked(new_pos);
    if zone != mf.last_zone {
        MobilityFactor {
            count: mf.count + 1,
            last_zone: zone,
        }
    } else {
        mf
    }
}
