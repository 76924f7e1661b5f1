use alloc::vec;
use alloc::vec::Vec;

/// Pareto dominance for minimization: no worse everywhere, better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut better = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        better |= x < y;
    }
    better
}

/// Indices grouped by non-domination level, best first.
pub fn fronts(objs: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let n = objs.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut count = vec![0usize; n];
    for i in 0..n {
        for j in i + 1..n {
            if dominates(&objs[i], &objs[j]) {
                dominated_by_me[i].push(j);
                count[j] += 1;
            } else if dominates(&objs[j], &objs[i]) {
                dominated_by_me[j].push(i);
                count[i] += 1;
            }
        }
    }
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by_me[i] {
                count[j] -= 1;
                if count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        out.push(current);
        current = next;
    }
    out
}

/// Rank of every point; rank 0 is the non-dominated set.
pub fn fast_nondominated_sort(objs: &[Vec<f64>]) -> Vec<usize> {
    let mut ranks = vec![0; objs.len()];
    for (r, front) in fronts(objs).iter().enumerate() {
        for &i in front {
            ranks[i] = r;
        }
    }
    ranks
}

/// Crowding distance within one front. Extremes of each objective get
/// infinity; interior points sum neighbour gaps normalised by the
/// objective's span.
pub fn crowding_distance(front: &[Vec<f64>]) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = front[0].len();
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..m {
        order.sort_by(|&a, &b| front[a][k].total_cmp(&front[b][k]).then(a.cmp(&b)));
        let (lo, hi) = (front[order[0]][k], front[order[n - 1]][k]);
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let span = hi - lo;
        if !(span > 0.0 && span.is_finite()) {
            continue;
        }
        for w in 1..n - 1 {
            dist[order[w]] += (front[order[w + 1]][k] - front[order[w - 1]][k]) / span;
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        assert_eq!(fast_nondominated_sort(&[vec![1.0]]), vec![0]);
        assert_eq!(fast_nondominated_sort(&[vec![1.0, 2.0], vec![2.0, 1.0], vec![2.0, 2.0]]), vec![0, 0, 1]);
        assert_eq!(fast_nondominated_sort(&[vec![1.0, 1.0], vec![1.0, 1.0]]), vec![0, 0]);
    }

    #[test]
    fn crowding_of_a_line() {
        let d = crowding_distance(&[vec![0.0, 2.0], vec![1.0, 1.0], vec![2.0, 0.0]]);
        assert_eq!(d, vec![f64::INFINITY, 2.0, f64::INFINITY]);
        assert!(crowding_distance(&[vec![0.0], vec![1.0]]).iter().all(|v| v.is_infinite()));
    }
}
