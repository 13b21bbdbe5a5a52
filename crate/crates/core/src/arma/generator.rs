use super::ArmaModel;
use crate::rng::{RandomStream, StreamId};

/// Number of warm-up steps discarded before the first emitted sample.
///
/// Pure moving-average models are exactly stationary once their input
/// history is full, so they only draw `q` inputs. Recursive models run
/// `10·max(p, q, 100)` steps.
pub fn burn_in_steps(p: usize, q: usize) -> usize {
    if p == 0 {
        q
    } else {
        10 * p.max(q).max(100)
    }
}

/// Streaming sampler for one ARMA process.
///
/// Histories are kept in doubled ring buffers so that the most recent
/// window is always a contiguous slice, newest first.
#[derive(Debug, Clone)]
pub struct NoiseGenerator {
    ar: Vec<f64>,
    ma: Vec<f64>,
    x_buf: Vec<f64>,
    x_pos: usize,
    y_buf: Vec<f64>,
    y_pos: usize,
    stream: RandomStream,
    silent: bool,
}

impl NoiseGenerator {
    /// Seeded generator, burned in to stationarity.
    pub fn new(model: &ArmaModel, id: StreamId) -> Self {
        let mut g = Self::cold(model, id);
        if !g.silent {
            let (p, q) = model.order();
            for _ in 0..burn_in_steps(p, q) {
                g.step();
            }
        }
        g
    }

    /// Generator with all-zero history and no burn-in.
    pub fn cold(model: &ArmaModel, id: StreamId) -> Self {
        let m = model.ma().len();
        let p = model.ar().len();
        Self {
            ar: model.ar().to_vec(),
            ma: model.ma().to_vec(),
            x_buf: vec![0.0; 2 * m],
            x_pos: 0,
            y_buf: vec![0.0; 2 * p.max(1)],
            y_pos: 0,
            stream: RandomStream::new(id),
            silent: model.is_zero(),
        }
    }

    /// Advances by one sample using a fresh Gaussian input.
    pub fn step(&mut self) -> f64 {
        if self.silent {
            return 0.0;
        }
        let x = self.stream.gaussian();
        self.step_with(x)
    }

    /// Advances by one sample with a caller-supplied input `x_k`.
    pub fn step_with(&mut self, x: f64) -> f64 {
        let m = self.ma.len();
        self.x_pos = (self.x_pos + m - 1) % m;
        self.x_buf[self.x_pos] = x;
        self.x_buf[self.x_pos + m] = x;
        let window = &self.x_buf[self.x_pos..self.x_pos + m];
        let mut y = dot(&self.ma, window);

        let p = self.ar.len();
        if p > 0 {
            y += dot(&self.ar, &self.y_buf[self.y_pos..self.y_pos + p]);
            self.y_pos = (self.y_pos + p - 1) % p;
            self.y_buf[self.y_pos] = y;
            self.y_buf[self.y_pos + p] = y;
        }
        y
    }

    /// Fills `out` with consecutive samples.
    pub fn fill(&mut self, out: &mut [f64]) {
        if self.silent {
            out.fill(0.0);
            return;
        }
        for v in out.iter_mut() {
            *v = self.step();
        }
    }
}

/// Output of a freshly seeded generator, computed from its Gaussian inputs.
///
/// `inputs` are the stream's draws in order, burn-in first; at least
/// `burn_in_steps(p, q) + out.len()` of them are required. The result is
/// bit-identical to [`NoiseGenerator::new`] followed by [`NoiseGenerator::fill`].
pub fn render(model: &ArmaModel, inputs: &[f64], out: &mut [f64]) {
    if model.is_zero() {
        out.fill(0.0);
        return;
    }
    let (p, q) = model.order();
    let burn = burn_in_steps(p, q);
    assert!(inputs.len() >= burn + out.len(), "not enough inputs to render");
    if p == 0 {
        // Reversed inputs make every newest-first window contiguous.
        let used = burn + out.len();
        let rev: Vec<f64> = inputs[..used].iter().rev().copied().collect();
        for (k, y) in out.iter_mut().enumerate() {
            let start = used - 1 - (burn + k);
            *y = dot(model.ma(), &rev[start..start + q + 1]);
        }
        return;
    }
    // Zero-padded histories reproduce the generator's cold start exactly.
    let total = burn + out.len();
    let mut xp = vec![0.0; q + total];
    xp[q..].copy_from_slice(&inputs[..total]);
    let mut yp = vec![0.0; p + total];
    for k in 0..total {
        let y = dot_rev(model.ma(), &xp, q + k) + dot_rev(model.ar(), &yp, p + k - 1);
        yp[p + k] = y;
    }
    out.copy_from_slice(&yp[p + burn..]);
}

/// `Σ_j c_j buf[end − j]`, accumulated in the same order as [`dot`].
#[inline]
fn dot_rev(c: &[f64], buf: &[f64], end: usize) -> f64 {
    let n = c.len();
    let w = &buf[end + 1 - n..=end];
    let mut acc = [0.0f64; 4];
    let (hc, tc) = c.split_at(n / 4 * 4);
    for (x, y) in hc.chunks_exact(4).zip(w.rchunks_exact(4)) {
        acc[0] += x[0] * y[3];
        acc[1] += x[1] * y[2];
        acc[2] += x[2] * y[1];
        acc[3] += x[3] * y[0];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (x, y) in tc.iter().zip(w[..n - hc.len()].iter().rev()) {
        s += x * y;
    }
    s
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    // Four independent accumulators keep the loop vectorisable.
    let b = &b[..a.len()];
    let mut acc = [0.0f64; 4];
    let (ha, ta) = a.split_at(a.len() / 4 * 4);
    let (hb, tb) = b.split_at(ha.len());
    for (x, y) in ha.chunks_exact(4).zip(hb.chunks_exact(4)) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (x, y) in ta.iter().zip(tb) {
        s += x * y;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id() -> StreamId {
        StreamId::new(1, 2, 3, 0)
    }

    #[test]
    fn zero_inputs_give_zero_output() {
        let m = ArmaModel::new(vec![0.9, -0.2], vec![1.0, 0.5]).unwrap();
        let mut g = NoiseGenerator::cold(&m, id());
        for _ in 0..50 {
            assert_eq!(g.step_with(0.0), 0.0);
        }
    }

    #[test]
    fn forced_recursions() {
        let ma = ArmaModel::new(vec![], vec![1.0, 1.0]).unwrap();
        let mut g = NoiseGenerator::cold(&ma, id());
        let ys: Vec<f64> = [1.0, 1.0, 0.0].iter().map(|&x| g.step_with(x)).collect();
        assert_eq!(ys, vec![1.0, 2.0, 1.0]);

        let ar = ArmaModel::new(vec![0.5], vec![1.0]).unwrap();
        let mut g = NoiseGenerator::cold(&ar, id());
        let ys: Vec<f64> = [1.0, 0.0, 0.0].iter().map(|&x| g.step_with(x)).collect();
        assert_eq!(ys, vec![1.0, 0.5, 0.25]);
    }

    #[test]
    fn recursion_with_longer_histories() {
        let m = ArmaModel::new(vec![0.5, -0.25], vec![1.0, 2.0, -1.0]).unwrap();
        let xs = [0.3, -1.2, 0.7, 2.0, -0.4, 0.1, 0.9];
        let mut g = NoiseGenerator::cold(&m, id());
        let got: Vec<f64> = xs.iter().map(|&x| g.step_with(x)).collect();
        let mut y = vec![0.0; xs.len()];
        for k in 0..xs.len() {
            let mut v = 0.0;
            for (j, b) in [1.0, 2.0, -1.0].iter().enumerate() {
                if k >= j {
                    v += b * xs[k - j];
                }
            }
            if k >= 1 {
                v += 0.5 * y[k - 1];
            }
            if k >= 2 {
                v += -0.25 * y[k - 2];
            }
            y[k] = v;
        }
        for (a, b) in got.iter().zip(&y) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_model_is_silent() {
        let mut g = NoiseGenerator::new(&ArmaModel::zero(), id());
        let mut out = vec![1.0; 10];
        g.fill(&mut out);
        assert!(out.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn deterministic_for_equal_streams() {
        let m = ArmaModel::new(vec![0.7], vec![0.1, 0.05]).unwrap();
        let mut a = NoiseGenerator::new(&m, id());
        let mut b = NoiseGenerator::new(&m, id());
        for _ in 0..100_000 {
            assert_eq!(a.step().to_bits(), b.step().to_bits());
        }
    }

    #[test]
    fn render_matches_streaming_generator() {
        let models = [
            ArmaModel::new(vec![0.7, -0.1], vec![0.1, 0.05]).unwrap(),
            ArmaModel::new(vec![], (0..37).map(|j| 0.01 * j as f64 - 0.1).collect()).unwrap(),
            ArmaModel::white(0.3),
            ArmaModel::zero(),
        ];
        for m in &models {
            let (p, q) = m.order();
            let n = 50;
            let mut stream = RandomStream::new(id());
            let inputs: Vec<f64> = (0..burn_in_steps(p, q) + n).map(|_| stream.gaussian()).collect();
            let mut a = vec![0.0; n];
            render(m, &inputs, &mut a);
            let mut b = vec![0.0; n];
            NoiseGenerator::new(m, id()).fill(&mut b);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn burn_in_lengths() {
        assert_eq!(burn_in_steps(0, 5), 5);
        assert_eq!(burn_in_steps(1, 0), 1000);
        assert_eq!(burn_in_steps(3, 250), 2500);
    }
}
