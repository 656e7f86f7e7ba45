use std::collections::VecDeque;

use ndarray::Array2;

use crate::tf::TfMask;

/// Number of 8-connected components of true cells.
pub fn isolated_region_count(mask: &TfMask) -> usize {
    let m = mask.values();
    let (rows, cols) = m.dim();
    let mut seen = Array2::from_elem((rows, cols), false);
    let mut queue = VecDeque::new();
    let mut count = 0;
    for ((i, j), &on) in m.indexed_iter() {
        if !on || seen[[i, j]] {
            continue;
        }
        count += 1;
        seen[[i, j]] = true;
        queue.push_back((i, j));
        while let Some((a, b)) = queue.pop_front() {
            for da in -1i64..=1 {
                for db in -1i64..=1 {
                    let (na, nb) = (a as i64 + da, b as i64 + db);
                    if na < 0 || nb < 0 || na >= rows as i64 || nb >= cols as i64 {
                        continue;
                    }
                    let (na, nb) = (na as usize, nb as usize);
                    if m[[na, nb]] && !seen[[na, nb]] {
                        seen[[na, nb]] = true;
                        queue.push_back((na, nb));
                    }
                }
            }
        }
    }
    count
}
