use std::collections::HashMap;

use super::forms::{norm, Point};

/// Symmetric Hausdorff distance between two vertex sets, counting only
/// points within `radius` of the origin on the side being measured. Nearest
/// neighbours are searched out to `cap`; anything farther reports infinity.
pub fn vertex_hausdorff(a: &[Point], b: &[Point], radius: f64, cap: f64) -> f64 {
    directed(a, b, radius, cap).max(directed(b, a, radius, cap))
}

fn directed(from: &[Point], to: &[Point], radius: f64, cap: f64) -> f64 {
    let bucket = |p: &Point| p.map(|x| (x / cap).floor() as i64);
    let mut grid: HashMap<[i64; 3], Vec<Point>> = HashMap::new();
    for p in to {
        grid.entry(bucket(p)).or_default().push(*p);
    }
    let mut worst: f64 = 0.0;
    for p in from.iter().filter(|p| norm(**p) <= radius) {
        let [i, j, k] = bucket(p);
        let mut best = f64::INFINITY;
        for di in -1..=1 {
            for dj in -1..=1 {
                for dk in -1..=1 {
                    for q in grid.get(&[i + di, j + dj, k + dk]).into_iter().flatten() {
                        best = best.min(norm([p[0] - q[0], p[1] - q[1], p[2] - q[2]]));
                    }
                }
            }
        }
        worst = worst.max(if best <= cap { best } else { f64::INFINITY });
    }
    worst
}
