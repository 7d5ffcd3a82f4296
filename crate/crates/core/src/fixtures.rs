//! Small configurations shared by unit tests.

use crate::cayley::cayley_sum;
use crate::config::PointConfig;

pub fn segre() -> PointConfig {
    PointConfig::from_i64(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap()
}

pub fn simplex(n: usize) -> PointConfig {
    crate::generate::unit_simplex(n)
}

pub fn four_fiber_parts() -> Vec<PointConfig> {
    vec![
        PointConfig::from_i64(2, &[&[0, 0], &[1, 0], &[2, 0]]).unwrap(),
        PointConfig::from_i64(2, &[&[0, 0], &[0, 1], &[0, 2]]).unwrap(),
        segre(),
        segre(),
    ]
}

pub fn four_fibers() -> PointConfig {
    cayley_sum(&four_fiber_parts()).unwrap()
}

pub fn nine_points() -> PointConfig {
    PointConfig::from_i64(
        6,
        &[
            &[0, 0, 0, 0, 0, 0],
            &[1, 0, 0, 0, 0, 0],
            &[0, 1, 0, 0, 0, 0],
            &[0, 0, 1, 0, 0, 0],
            &[0, 0, 0, 1, 0, 0],
            &[0, 0, 0, 0, 1, 0],
            &[0, 0, 0, 0, 0, 1],
            &[-1, 2, 0, 0, -2, 1],
            &[0, 0, -1, 2, -2, 1],
        ],
    )
    .unwrap()
}

pub use crate::generate::segre_product;
