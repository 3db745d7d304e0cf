//! Deterministic floating-point reductions.
//!
//! Inputs are split into fixed-size chunks, each chunk is summed with
//! Neumaier compensation, and the chunk partials are combined sequentially in
//! chunk order. The chunk boundaries depend only on the input length, so the
//! result is bit-identical whatever the rayon pool size.

use rayon::prelude::*;

/// Elements per chunk. Fixed: changing it changes results in the last bits.
pub const CHUNK: usize = 4096;

/// Neumaier-compensated sequential sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Deterministic chunked sum of a slice.
pub fn sum(values: &[f64]) -> f64 {
    if values.len() <= CHUNK {
        return compensated_sum(values.iter().copied());
    }
    let partials: Vec<f64> = values
        .par_chunks(CHUNK)
        .map(|c| compensated_sum(c.iter().copied()))
        .collect();
    compensated_sum(partials)
}

/// Deterministic chunked `Σ |a_i - b_i|`.
pub fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "l1_distance on slices of different length");
    if a.len() <= CHUNK {
        return compensated_sum(a.iter().zip(b).map(|(x, y)| (x - y).abs()));
    }
    let partials: Vec<f64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| compensated_sum(x.iter().zip(y).map(|(p, q)| (p - q).abs())))
        .collect();
    compensated_sum(partials)
}

/// Divides every entry by `total` in place.
pub fn scale_in_place(values: &mut [f64], total: f64) {
    values.par_iter_mut().for_each(|x| *x /= total);
}
