//! Double description: extreme rays of a pointed cone `{c : G c ≥ 0}`.

use num_traits::{Signed, Zero};

use super::linalg::{dot, inverse, normalize_direction, rank, Q};

struct Ray {
    v: Vec<Q>,
    zeros: Vec<usize>,
}

/// Extreme rays of `{c ∈ ℚ^d : row · c ≥ 0 for every row}`.
///
/// Returns `None` when the rows do not have full column rank, i.e. the cone
/// contains a line.
pub fn extreme_rays(rows: &[Vec<Q>], d: usize) -> Option<Vec<Vec<Q>>> {
    if d == 0 {
        return Some(Vec::new());
    }
    if rank(rows, d) < d {
        return None;
    }
    let mut chosen: Vec<usize> = Vec::new();
    let mut picked: Vec<Vec<Q>> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut trial = picked.clone();
        trial.push(r.clone());
        if rank(&trial, d) == trial.len() {
            picked = trial;
            chosen.push(i);
            if chosen.len() == d {
                break;
            }
        }
    }
    let inv = inverse(&picked)?;
    let mut rays: Vec<Ray> = (0..d)
        .map(|j| {
            let mut v: Vec<Q> = inv.iter().map(|row| row[j].clone()).collect();
            normalize_direction(&mut v);
            let zeros = chosen.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &i)| i).collect();
            Ray { v, zeros }
        })
        .collect();

    for (h, row) in rows.iter().enumerate() {
        if chosen.contains(&h) || row.iter().all(|x| x.is_zero()) {
            continue;
        }
        let vals: Vec<Q> = rays.iter().map(|r| dot(row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut next: Vec<Ray> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if !vals[i].is_negative() {
                let mut zeros = r.zeros.clone();
                if vals[i].is_zero() {
                    zeros.push(h);
                }
                next.push(Ray { v: r.v.clone(), zeros });
            }
        }
        for &p in &pos {
            for &n in &neg {
                let common: Vec<usize> =
                    rays[p].zeros.iter().copied().filter(|z| rays[n].zeros.contains(z)).collect();
                if common.len() + 2 < d {
                    continue;
                }
                let adjacent = rays.iter().enumerate().all(|(k, r)| {
                    k == p || k == n || !common.iter().all(|z| r.zeros.contains(z))
                });
                if !adjacent {
                    continue;
                }
                let mut v: Vec<Q> = rays[n]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(xn, xp)| &vals[p] * xn - &vals[n] * xp)
                    .collect();
                normalize_direction(&mut v);
                let mut zeros = common;
                zeros.push(h);
                next.push(Ray { v, zeros });
            }
        }
        rays = next;
    }
    let mut out: Vec<Vec<Q>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Some(out)
}
