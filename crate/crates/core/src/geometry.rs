//! Field geometry: points, the rectangular sensing field, and the zone grid
//! used by the position-based protocols.

use std::fmt;

use crate::error::GeometryError;

/// A point (or displacement) in the plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.2}, {:.2})", self.x, self.y)
    }
}

/// Euclidean distance between two points.
pub fn distance(a: Vec2, b: Vec2) -> f64 {
    let (dx, dy) = (a.x - b.x, a.y - b.y);
    (dx * dx + dy * dy).sqrt()
}

/// The rectangular sensing field `[0, width] x [0, height]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldGeometry {
    pub width: f64,
    pub height: f64,
}

impl Default for FieldGeometry {
    fn default() -> Self {
        Self {
            width: 1000.0,
            height: 1000.0,
        }
    }
}

impl FieldGeometry {
    pub fn new(width: f64, height: f64) -> Result<Self, GeometryError> {
        if !(width > 0.0 && width.is_finite() && height > 0.0 && height.is_finite()) {
            return Err(GeometryError::InvalidField { width, height });
        }
        Ok(Self { width, height })
    }

    /// Closed-rectangle containment.
    pub fn contains(&self, p: Vec2) -> bool {
        p.is_finite() && p.x >= 0.0 && p.x <= self.width && p.y >= 0.0 && p.y <= self.height
    }

    pub fn center(&self) -> Vec2 {
        Vec2::new(self.width / 2.0, self.height / 2.0)
    }
}

/// Row-major index of a zone in a [`ZoneGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZoneId(pub u32);

impl fmt::Display for ZoneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z{}", self.0)
    }
}

/// Partition of the field into `rows x cols` equal rectangles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZoneGrid {
    rows: u32,
    cols: u32,
    cell_width: f64,
    cell_height: f64,
}

impl ZoneGrid {
    pub fn new(rows: u32, cols: u32, field: &FieldGeometry) -> Result<Self, GeometryError> {
        if rows == 0 || cols == 0 {
            return Err(GeometryError::InvalidGrid { rows, cols });
        }
        Ok(Self {
            rows,
            cols,
            cell_width: field.width / cols as f64,
            cell_height: field.height / rows as f64,
        })
    }

    pub fn rows(&self) -> u32 {
        self.rows
    }

    pub fn cols(&self) -> u32 {
        self.cols
    }

    pub fn zone_count(&self) -> u32 {
        self.rows * self.cols
    }

    pub fn cell_width(&self) -> f64 {
        self.cell_width
    }

    pub fn cell_height(&self) -> f64 {
        self.cell_height
    }

    /// Largest Manhattan distance from any point of a zone to its center.
    pub fn max_centerness(&self) -> f64 {
        (self.cell_width + self.cell_height) / 2.0
    }

    /// Length of a zone's diagonal.
    pub fn cell_diagonal(&self) -> f64 {
        self.cell_width.hypot(self.cell_height)
    }

    /// Zone containing `pos`. Points on the far boundary clamp into the last
    /// row/column so the mapping is total on the closed field.
    pub fn zone_index(&self, pos: Vec2, field: &FieldGeometry) -> Result<ZoneId, GeometryError> {
        if !field.contains(pos) {
            return Err(GeometryError::OutsideField { pos });
        }
        Ok(self.zone_of_unchecked(pos))
    }

    /// Same as [`zone_index`](Self::zone_index) for positions already known to
    /// be inside the field.
    pub(crate) fn zone_of_unchecked(&self, pos: Vec2) -> ZoneId {
        let col = ((pos.x / self.cell_width).floor() as i64).clamp(0, self.cols as i64 - 1);
        let row = ((pos.y / self.cell_height).floor() as i64).clamp(0, self.rows as i64 - 1);
        ZoneId(row as u32 * self.cols + col as u32)
    }

    pub fn zone_center(&self, zone: ZoneId) -> Result<Vec2, GeometryError> {
        if zone.0 >= self.zone_count() {
            return Err(GeometryError::InvalidZone {
                zone: zone.0,
                count: self.zone_count(),
            });
        }
        let row = zone.0 / self.cols;
        let col = zone.0 % self.cols;
        Ok(Vec2::new(
            (col as f64 + 0.5) * self.cell_width,
            (row as f64 + 0.5) * self.cell_height,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid4() -> (ZoneGrid, FieldGeometry) {
        let field = FieldGeometry::default();
        (ZoneGrid::new(4, 4, &field).unwrap(), field)
    }

    #[test]
    fn zone_index_examples() {
        let (grid, field) = grid4();
        assert_eq!(
            grid.zone_index(Vec2::new(0.0, 0.0), &field).unwrap(),
            ZoneId(0)
        );
        assert_eq!(
            grid.zone_index(Vec2::new(999.9, 999.9), &field).unwrap(),
            ZoneId(15)
        );
        assert_eq!(
            grid.zone_index(Vec2::new(260.0, 10.0), &field).unwrap(),
            ZoneId(1)
        );
    }

    #[test]
    fn far_boundary_clamps() {
        let (grid, field) = grid4();
        assert_eq!(
            grid.zone_index(Vec2::new(1000.0, 1000.0), &field).unwrap(),
            ZoneId(15)
        );
        assert_eq!(
            grid.zone_index(Vec2::new(1000.0, 0.0), &field).unwrap(),
            ZoneId(3)
        );
    }

    #[test]
    fn outside_field_is_rejected() {
        let (grid, field) = grid4();
        assert!(grid.zone_index(Vec2::new(-0.1, 5.0), &field).is_err());
        assert!(grid.zone_index(Vec2::new(5.0, 1000.5), &field).is_err());
        assert!(grid.zone_index(Vec2::new(f64::NAN, 5.0), &field).is_err());
    }

    #[test]
    fn zone_center_examples() {
        let (grid, field) = grid4();
        assert_eq!(
            grid.zone_center(ZoneId(0)).unwrap(),
            Vec2::new(125.0, 125.0)
        );
        assert_eq!(
            grid.zone_center(ZoneId(15)).unwrap(),
            Vec2::new(875.0, 875.0)
        );
        let single = ZoneGrid::new(1, 1, &field).unwrap();
        assert_eq!(
            single.zone_center(ZoneId(0)).unwrap(),
            Vec2::new(500.0, 500.0)
        );
        assert!(grid.zone_center(ZoneId(16)).is_err());
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(Vec2::new(0.0, 0.0), Vec2::new(0.0, 0.0)), 0.0);
        assert_eq!(distance(Vec2::new(0.0, 0.0), Vec2::new(3.0, 4.0)), 5.0);
        assert_eq!(
            distance(Vec2::new(100.0, 100.0), Vec2::new(100.0, 350.0)),
            250.0
        );
    }

    #[test]
    fn invalid_grid_and_field() {
        let field = FieldGeometry::default();
        assert!(ZoneGrid::new(0, 4, &field).is_err());
        assert!(FieldGeometry::new(0.0, 10.0).is_err());
    }

    #[test]
    fn zone_partition_is_total() {
        use rand::{Rng, SeedableRng};
        let (grid, field) = grid4();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut counts = [0usize; 16];
        for _ in 0..10_000 {
            let p = Vec2::new(
                rng.random_range(0.0..=1000.0),
                rng.random_range(0.0..=1000.0),
            );
            let z = grid.zone_index(p, &field).unwrap();
            counts[z.0 as usize] += 1;
            let c = grid.zone_center(z).unwrap();
            assert_eq!(grid.zone_index(c, &field).unwrap(), z);
        }
        assert_eq!(counts.iter().sum::<usize>(), 10_000);
    }

    fn pt() -> impl Strategy<Value = Vec2> {
        (-1e4f64..1e4, -1e4f64..1e4).prop_map(|(x, y)| Vec2::new(x, y))
    }

    proptest! {
        #[test]
        fn distance_symmetric_and_triangle(a in pt(), b in pt(), c in pt()) {
            prop_assert_eq!(distance(a, b), distance(b, a));
            prop_assert!(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9);
            prop_assert!(distance(a, b) >= 0.0);
        }
    }
}
