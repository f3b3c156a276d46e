use super::init::{check_positive, draw_matrix, draw_vec, rng_for, Stream};
use super::sigmoid;
use crate::error::{Error, Result};
use crate::matrix::{dot, FeatureMatrix, Matrix};

/// Gate weights of a bias-free LSTM cell. Every matrix is `H x (D + H)` and
/// multiplies the concatenation `[x_t; h_{t-1}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmParams {
    input_dim: usize,
    hidden_dim: usize,
    pub w_i: Matrix,
    pub w_f: Matrix,
    pub w_o: Matrix,
    pub w_c: Matrix,
}

/// Recurrent state `(h, c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmState {
    pub h: Vec<f64>,
    pub c: Vec<f64>,
}

/// Gate activations of one step, exposed for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmGates {
    pub input: Vec<f64>,
    pub forget: Vec<f64>,
    pub output: Vec<f64>,
    /// `tanh(W_c [x; h])`, the candidate written into the cell.
    pub candidate: Vec<f64>,
}

impl LstmState {
    pub fn zeros(hidden_dim: usize) -> Self {
        LstmState {
            h: vec![0.0; hidden_dim],
            c: vec![0.0; hidden_dim],
        }
    }
}

impl LstmParams {
    pub fn new(w_i: Matrix, w_f: Matrix, w_o: Matrix, w_c: Matrix) -> Result<Self> {
        let (rows, cols) = (w_i.rows(), w_i.cols());
        for (name, w) in [("W_f", &w_f), ("W_o", &w_o), ("W_c", &w_c)] {
            if (w.rows(), w.cols()) != (rows, cols) {
                return Err(Error::shape(format!(
                    "{name} is {}x{}, W_i is {rows}x{cols}",
                    w.rows(),
                    w.cols()
                )));
            }
        }
        if rows == 0 || cols <= rows {
            return Err(Error::shape(format!(
                "gate matrices must be H x (D + H) with H, D >= 1, got {rows}x{cols}"
            )));
        }
        Ok(LstmParams {
            input_dim: cols - rows,
            hidden_dim: rows,
            w_i,
            w_f,
            w_o,
            w_c,
        })
    }

    /// All-zero gate weights.
    pub fn zeros(input_dim: usize, hidden_dim: usize) -> Result<Self> {
        check_positive(&[("input_dim", input_dim), ("hidden_dim", hidden_dim)])?;
        let z = Matrix::zeros(hidden_dim, input_dim + hidden_dim);
        LstmParams::new(z.clone(), z.clone(), z.clone(), z)
    }

    /// Seeded uniform initialisation with bound `1/sqrt(D + H)`.
    pub fn init(seed: u64, input_dim: usize, hidden_dim: usize) -> Result<Self> {
        check_positive(&[("input_dim", input_dim), ("hidden_dim", hidden_dim)])?;
        let mut rng = rng_for(seed, Stream::Lstm);
        Self::draw(&mut rng, input_dim, hidden_dim)
    }

    fn draw(
        rng: &mut rand_chacha::ChaCha8Rng,
        input_dim: usize,
        hidden_dim: usize,
    ) -> Result<Self> {
        let fan_in = input_dim + hidden_dim;
        let mut draw = || draw_matrix(rng, hidden_dim, fan_in, fan_in);
        let (w_i, w_f, w_o, w_c) = (draw(), draw(), draw(), draw());
        LstmParams::new(w_i, w_f, w_o, w_c)
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn hidden_dim(&self) -> usize {
        self.hidden_dim
    }

    /// One step of the cell, also returning the gate activations.
    pub fn step_with_gates(&self, state: &LstmState, x: &[f64]) -> Result<(LstmState, LstmGates)> {
        if x.len() != self.input_dim {
            return Err(Error::shape(format!(
                "input has {} values, cell expects {}",
                x.len(),
                self.input_dim
            )));
        }
        if state.h.len() != self.hidden_dim || state.c.len() != self.hidden_dim {
            return Err(Error::shape(format!(
                "state is (h: {}, c: {}), cell hidden size is {}",
                state.h.len(),
                state.c.len(),
                self.hidden_dim
            )));
        }
        let mut z = Vec::with_capacity(self.input_dim + self.hidden_dim);
        z.extend_from_slice(x);
        z.extend_from_slice(&state.h);

        let gate = |w: &Matrix, f: fn(f64) -> f64| -> Vec<f64> {
            w.iter_rows().map(|row| f(dot(row, &z))).collect()
        };
        let gates = LstmGates {
            input: gate(&self.w_i, sigmoid),
            forget: gate(&self.w_f, sigmoid),
            output: gate(&self.w_o, sigmoid),
            candidate: gate(&self.w_c, f64::tanh),
        };
        let c: Vec<f64> = (0..self.hidden_dim)
            .map(|k| gates.input[k] * gates.candidate[k] + gates.forget[k] * state.c[k])
            .collect();
        let h = c
            .iter()
            .zip(&gates.output)
            .map(|(c, o)| o * c.tanh())
            .collect();
        Ok((LstmState { h, c }, gates))
    }
}

/// `c' = i * tanh(W_c z) + f * c`, `h' = o * tanh(c')` with `z = [x; h]`.
pub fn lstm_step(params: &LstmParams, state: &LstmState, x: &[f64]) -> Result<LstmState> {
    params.step_with_gates(state, x).map(|(s, _)| s)
}

/// Hidden outputs for every frame, starting from the zero state. Row `t` is `h_t`.
pub fn lstm_scan(params: &LstmParams, frames: &FeatureMatrix) -> Result<Matrix> {
    scan_rows(params, frames.iter_rows(), frames.cols())
}

fn scan_rows<'a>(
    params: &LstmParams,
    rows: impl Iterator<Item = &'a [f64]>,
    cols: usize,
) -> Result<Matrix> {
    if cols != params.input_dim {
        return Err(Error::shape(format!(
            "frames have {cols} columns, cell expects {}",
            params.input_dim
        )));
    }
    let mut state = LstmState::zeros(params.hidden_dim);
    let mut out = Vec::new();
    let mut n = 0;
    for x in rows {
        state = lstm_step(params, &state, x)?;
        out.extend_from_slice(&state.h);
        n += 1;
    }
    Matrix::new(n, params.hidden_dim, out)
}

/// Bidirectional LSTM with a linear-sigmoid readout producing one importance
/// score in `(0, 1)` per frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceScorer {
    pub forward: LstmParams,
    pub backward: LstmParams,
    /// Weights over `[h_fwd; h_bwd]`, length `2H`.
    pub readout: Vec<f64>,
    pub bias: f64,
}

impl ImportanceScorer {
    pub fn new(
        forward: LstmParams,
        backward: LstmParams,
        readout: Vec<f64>,
        bias: f64,
    ) -> Result<Self> {
        if forward.input_dim != backward.input_dim || forward.hidden_dim != backward.hidden_dim {
            return Err(Error::shape(format!(
                "forward cell is {}->{}, backward cell is {}->{}",
                forward.input_dim, forward.hidden_dim, backward.input_dim, backward.hidden_dim
            )));
        }
        if readout.len() != 2 * forward.hidden_dim {
            return Err(Error::shape(format!(
                "readout has {} weights, expected {}",
                readout.len(),
                2 * forward.hidden_dim
            )));
        }
        if !bias.is_finite() || readout.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("readout must be finite"));
        }
        Ok(ImportanceScorer {
            forward,
            backward,
            readout,
            bias,
        })
    }

    pub fn zeros(input_dim: usize, hidden_dim: usize) -> Result<Self> {
        let cell = LstmParams::zeros(input_dim, hidden_dim)?;
        ImportanceScorer::new(cell.clone(), cell, vec![0.0; 2 * hidden_dim], 0.0)
    }

    pub fn init(seed: u64, input_dim: usize, hidden_dim: usize) -> Result<Self> {
        check_positive(&[("input_dim", input_dim), ("hidden_dim", hidden_dim)])?;
        let mut rng = rng_for(seed, Stream::Scorer);
        let forward = LstmParams::draw(&mut rng, input_dim, hidden_dim)?;
        let backward = LstmParams::draw(&mut rng, input_dim, hidden_dim)?;
        let mut readout = draw_vec(&mut rng, 2 * hidden_dim + 1, 2 * hidden_dim);
        let bias = readout.pop().expect("non-empty");
        ImportanceScorer::new(forward, backward, readout, bias)
    }

    /// The scorer with the two directions exchanged, readout halves included.
    /// Scoring reversed frames with the mirrored scorer reverses the scores.
    pub fn mirrored(&self) -> Self {
        let h = self.forward.hidden_dim;
        let mut readout = self.readout[h..].to_vec();
        readout.extend_from_slice(&self.readout[..h]);
        ImportanceScorer {
            forward: self.backward.clone(),
            backward: self.forward.clone(),
            readout,
            bias: self.bias,
        }
    }
}

pub fn score_importance(scorer: &ImportanceScorer, frames: &FeatureMatrix) -> Result<Vec<f64>> {
    let h = scorer.forward.hidden_dim;
    let fwd = lstm_scan(&scorer.forward, frames)?;
    let bwd = scan_rows(&scorer.backward, frames.iter_rows().rev(), frames.cols())?;
    let t_len = frames.rows();
    Ok((0..t_len)
        .map(|t| {
            let logit = dot(&scorer.readout[..h], fwd.row(t))
                + dot(&scorer.readout[h..], bwd.row(t_len - 1 - t))
                + scorer.bias;
            sigmoid(logit)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(x: f64) -> f64 {
        1.0 / (1.0 + (-x).exp())
    }

    fn scalar_params(wi: [f64; 2], wf: [f64; 2], wo: [f64; 2], wc: [f64; 2]) -> LstmParams {
        let m = |w: [f64; 2]| Matrix::new(1, 2, w.to_vec()).unwrap();
        LstmParams::new(m(wi), m(wf), m(wo), m(wc)).unwrap()
    }

    #[test]
    fn zero_weights_force_half_gates() {
        let p = LstmParams::zeros(3, 2).unwrap();
        let (s, g) = p
            .step_with_gates(&LstmState::zeros(2), &[1.0, -2.0, 5.0])
            .unwrap();
        assert!(g
            .input
            .iter()
            .chain(&g.forget)
            .chain(&g.output)
            .all(|&v| v == 0.5));
        assert_eq!(s, LstmState::zeros(2));
    }

    #[test]
    fn zero_weights_carry_half_the_cell() {
        let p = LstmParams::zeros(1, 1).unwrap();
        let s = lstm_step(
            &p,
            &LstmState {
                h: vec![0.0],
                c: vec![1.0],
            },
            &[0.3],
        )
        .unwrap();
        assert_eq!(s.c, vec![0.5]);
        assert_eq!(s.h, vec![0.5 * 0.5f64.tanh()]);
    }

    #[test]
    fn unit_weights_scalar_step() {
        let p = scalar_params([1.0; 2], [1.0; 2], [1.0; 2], [1.0; 2]);
        let s = lstm_step(&p, &LstmState::zeros(1), &[1.0]).unwrap();
        let c = sig(1.0) * 1f64.tanh();
        assert!((s.c[0] - c).abs() < 1e-15);
        assert!((s.h[0] - sig(1.0) * c.tanh()).abs() < 1e-15);
    }

    #[test]
    fn shape_errors() {
        let p = LstmParams::zeros(2, 2).unwrap();
        assert!(matches!(
            lstm_step(&p, &LstmState::zeros(2), &[1.0]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            lstm_step(&p, &LstmState::zeros(3), &[1.0, 1.0]),
            Err(Error::Shape(_))
        ));
        assert!(LstmParams::new(
            Matrix::zeros(2, 4),
            Matrix::zeros(2, 4),
            Matrix::zeros(2, 3),
            Matrix::zeros(2, 4)
        )
        .is_err());
        let frames = Matrix::zeros(4, 3);
        assert!(lstm_scan(&p, &frames).is_err());
    }

    #[test]
    fn scan_edge_cases() {
        let p = LstmParams::init(1, 2, 3).unwrap();
        let out = lstm_scan(&p, &Matrix::zeros(0, 2)).unwrap();
        assert_eq!((out.rows(), out.cols()), (0, 3));
        let z = LstmParams::zeros(2, 3).unwrap();
        let frames = Matrix::new(2, 2, vec![1.0, 2.0, -3.0, 4.0]).unwrap();
        assert!(lstm_scan(&z, &frames)
            .unwrap()
            .as_slice()
            .iter()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn scan_matches_chained_scalar_steps() {
        let (wi, wf, wo, wc) = ([0.3, -0.7], [0.9, 0.2], [-0.4, 0.6], [1.1, -0.5]);
        let p = scalar_params(wi, wf, wo, wc);
        let xs = [0.5, -1.2, 2.0];
        let frames = Matrix::new(3, 1, xs.to_vec()).unwrap();
        let out = lstm_scan(&p, &frames).unwrap();
        let (mut h, mut c) = (0.0f64, 0.0f64);
        for (t, &x) in xs.iter().enumerate() {
            let i = sig(wi[0] * x + wi[1] * h);
            let f = sig(wf[0] * x + wf[1] * h);
            let o = sig(wo[0] * x + wo[1] * h);
            let g = (wc[0] * x + wc[1] * h).tanh();
            c = i * g + f * c;
            h = o * c.tanh();
            assert!((out.get(t, 0) - h).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_scorer_gives_half() {
        let s = ImportanceScorer::zeros(3, 4).unwrap();
        let scores = score_importance(&s, &Matrix::from_fn(5, 3, |r, c| (r * c) as f64)).unwrap();
        assert_eq!(scores, vec![0.5; 5]);
    }

    #[test]
    fn single_frame_score() {
        let s = ImportanceScorer::init(9, 2, 3).unwrap();
        let x = [0.4, -0.8];
        let frames = Matrix::new(1, 2, x.to_vec()).unwrap();
        let hf = lstm_step(&s.forward, &LstmState::zeros(3), &x).unwrap().h;
        let hb = lstm_step(&s.backward, &LstmState::zeros(3), &x).unwrap().h;
        let logit: f64 = hf
            .iter()
            .chain(&hb)
            .zip(&s.readout)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            + s.bias;
        let got = score_importance(&s, &frames).unwrap();
        assert!((got[0] - sig(logit)).abs() < 1e-15);
    }

    #[test]
    fn mirrored_scorer_reverses_scores() {
        let s = ImportanceScorer::init(4, 3, 5).unwrap();
        let frames = Matrix::from_fn(7, 3, |r, c| ((r * 3 + c) as f64 * 0.37).sin());
        let reversed = Matrix::from_rows(3, frames.iter_rows().rev()).unwrap();
        let mut a = score_importance(&s, &frames).unwrap();
        let b = score_importance(&s.mirrored(), &reversed).unwrap();
        a.reverse();
        assert_eq!(a, b);
    }

    #[test]
    fn scorer_rejects_mismatched_cells() {
        let f = LstmParams::zeros(2, 3).unwrap();
        let b = LstmParams::zeros(2, 4).unwrap();
        assert!(ImportanceScorer::new(f.clone(), b, vec![0.0; 6], 0.0).is_err());
        assert!(ImportanceScorer::new(f.clone(), f, vec![0.0; 5], 0.0).is_err());
    }
}
