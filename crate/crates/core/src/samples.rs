//! A small catalogue of notable systems, used as fixtures by the tests,
//! benchmarks and docs.

use std::collections::BTreeSet;

use crate::construct;
use crate::design::{ColourClass, ColouredStarSystem, Star, StarSystem};

/// The fixed `S_3(6)` with its forced one-block-per-colour colouring.
pub fn s3_6() -> ColouredStarSystem {
    construct::base_s3_6()
}

/// The 8-chromatic `S_3(9)` with its 8-class colouring: the smallest
/// order admitting a colouring with fewer colours than blocks, and the
/// fewest colours any `S_3(9)` admits.
pub fn s3_9_eight_chromatic() -> ColouredStarSystem {
    construct::base_s3_9()
}

/// An `S_3(9)` in which any two blocks share a vertex, so all 12 blocks
/// need distinct colours.
pub fn s3_9_twelve_chromatic() -> StarSystem {
    let b = |root, p: [u32; 3]| Star::new(root, p.to_vec());
    StarSystem::new(
        9,
        3,
        vec![
            b(1, [2, 3, 4]),
            b(1, [5, 6, 7]),
            b(2, [3, 4, 5]),
            b(3, [4, 5, 6]),
            b(3, [7, 8, 9]),
            b(4, [5, 6, 7]),
            b(6, [2, 5, 7]),
            b(7, [2, 5, 8]),
            b(8, [1, 4, 5]),
            b(8, [2, 6, 9]),
            b(9, [1, 5, 6]),
            b(9, [2, 4, 7]),
        ],
    )
}

/// An `S_3(10)` meeting the trivial lower bound `L(10,3) = 8`, with an
/// 8-class colouring.
pub fn s3_10_eight_chromatic() -> ColouredStarSystem {
    let b = |root, p: [u32; 3]| Star::new(root, p.to_vec());
    let pairs: Vec<Vec<Star>> = vec![
        vec![b(1, [2, 4, 5]), b(6, [7, 8, 10])],
        vec![b(2, [3, 4, 5]), b(9, [6, 8, 10])],
        vec![b(4, [5, 6, 7]), b(10, [1, 2, 3])],
        vec![b(4, [8, 9, 10]), b(6, [1, 2, 3])],
        vec![b(5, [6, 9, 10]), b(7, [1, 2, 3])],
        vec![b(7, [5, 9, 10]), b(8, [1, 2, 3])],
        vec![b(8, [5, 7, 10]), b(9, [1, 2, 3])],
        vec![b(3, [1, 4, 5])],
    ];
    let mut blocks = Vec::new();
    let mut classes = Vec::new();
    for (k, group) in pairs.into_iter().enumerate() {
        let mut members = BTreeSet::new();
        for star in group {
            members.insert(blocks.len());
            blocks.push(star);
        }
        classes.push(ColourClass { label: format!("K{}", k + 1), members });
    }
    ColouredStarSystem { system: StarSystem::new(10, 3, blocks), classes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{verify_colouring, verify_system};

    #[test]
    fn all_samples_verify() {
        assert_eq!(verify_colouring(&s3_6()), Ok(()));
        assert_eq!(verify_colouring(&s3_9_eight_chromatic()), Ok(()));
        assert_eq!(verify_system(&s3_9_twelve_chromatic()), Ok(()));
        let ten = s3_10_eight_chromatic();
        assert_eq!(verify_colouring(&ten), Ok(()));
        assert_eq!(ten.class_count(), 8);
    }
}
