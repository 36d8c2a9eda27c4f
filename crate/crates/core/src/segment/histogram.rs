use crate::error::{Error, Result};

/// Fixed-width histogram; bin `i` covers `[origin + i·w, origin + (i+1)·w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_width: f64,
    pub origin: f64,
    pub counts: Vec<f64>,
}

fn pad_bins(sigma_bins: f64) -> usize {
    (3.0 * sigma_bins).ceil().max(0.0) as usize
}

impl Histogram {
    /// Raw counts with `ceil(3σ)` empty bins of padding on each side, so that
    /// smoothing never pushes mass off the ends.
    pub fn build(values: &[f64], bin_width: f64, sigma_bins: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::NoData("histogram"));
        }
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let pad = pad_bins(sigma_bins);
        let origin = min - pad as f64 * bin_width;
        let span = ((max - origin) / bin_width + 1e-9).floor() as usize + 1;
        let mut counts = vec![0.0; span + pad];
        for &v in values {
            counts[Self::index(origin, bin_width, v)] += 1.0;
        }
        Ok(Self {
            bin_width,
            origin,
            counts,
        })
    }

    fn index(origin: f64, bin_width: f64, v: f64) -> usize {
        ((v - origin) / bin_width + 1e-9).floor().max(0.0) as usize
    }

    pub fn bin_of(&self, v: f64) -> usize {
        Self::index(self.origin, self.bin_width, v).min(self.counts.len() - 1)
    }

    pub fn center(&self, bin: usize) -> f64 {
        self.origin + (bin as f64 + 0.5) * self.bin_width
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    /// Gaussian smoothing with the kernel truncated at ±3σ bins. Each source
    /// bin's weights are renormalized over the targets that exist, so total
    /// mass is preserved.
    pub fn smoothed(&self, sigma_bins: f64) -> Histogram {
        if sigma_bins <= 0.0 {
            return self.clone();
        }
        let r = pad_bins(sigma_bins) as isize;
        let kernel: Vec<f64> = (-r..=r)
            .map(|k| (-(k * k) as f64 / (2.0 * sigma_bins * sigma_bins)).exp())
            .collect();
        let n = self.counts.len() as isize;
        let mut out = vec![0.0; self.counts.len()];
        for (i, &c) in self.counts.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let i = i as isize;
            let norm: f64 = (-r..=r)
                .filter(|k| (0..n).contains(&(i + k)))
                .map(|k| kernel[(k + r) as usize])
                .sum();
            for k in -r..=r {
                let j = i + k;
                if (0..n).contains(&j) {
                    out[j as usize] += c * kernel[(k + r) as usize] / norm;
                }
            }
        }
        Histogram {
            bin_width: self.bin_width,
            origin: self.origin,
            counts: out,
        }
    }

    /// Index of the maximal bin; ties go to the lower bin.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &c) in self.counts.iter().enumerate() {
            if c > self.counts[best] {
                best = i;
            }
        }
        best
    }
}

/// Centre of the maximal bin of the smoothed histogram.
pub fn histogram_peak(values: &[f64], bin_width: f64, sigma_bins: f64) -> Result<f64> {
    let h = Histogram::build(values, bin_width, sigma_bins)?.smoothed(sigma_bins);
    Ok(h.center(h.argmax()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_values() {
        let p = histogram_peak(&[3.3; 7], 0.5, 2.0).unwrap();
        assert!((p - 3.3).abs() <= 0.25);
    }

    #[test]
    fn empty_is_no_data() {
        assert!(matches!(histogram_peak(&[], 1.0, 1.0), Err(Error::NoData(_))));
    }

    #[test]
    fn mass_is_conserved() {
        let v: Vec<f64> = (0..50).map(|i| (i * 37 % 23) as f64 * 0.3).collect();
        let h = Histogram::build(&v, 0.5, 2.0).unwrap();
        assert!((h.smoothed(2.0).total() - 50.0).abs() < 1e-9);
    }
}
