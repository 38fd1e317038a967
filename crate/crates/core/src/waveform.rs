//! Prototype filters, GFDM / Linear GFDM modulation matrices, QAM mapping and
//! transmit-signal synthesis.
//!
//! Data positions are indexed subcarrier-major: column `m * K + k` carries the
//! symbol on subcarrier `k` of subsymbol `m`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::linalg::CMatrix;
use crate::{Error, Result};

/// Prototype filter selection.
#[derive(Debug, Clone, PartialEq)]
pub enum FilterKind {
    /// Frequency-sampling half-Nyquist design with overlap factor `M`.
    Martin,
    /// Constant pulse over the first `K` samples.
    Rect,
    /// User-supplied taps of length `K * M`, normalized to unit energy.
    Custom(Vec<f64>),
}

impl std::str::FromStr for FilterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "martin" => Ok(FilterKind::Martin),
            "rect" => Ok(FilterKind::Rect),
            other => Err(Error::UnsupportedFilter(other.to_string())),
        }
    }
}

/// Frame dimensions and constellation choice.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveformParams {
    k: usize,
    m: usize,
    order: usize,
    filter: FilterKind,
}

impl WaveformParams {
    /// `k` subcarriers (even), `m` subsymbols, square `order`-QAM.
    pub fn new(k: usize, m: usize, order: usize, filter: FilterKind) -> Result<Self> {
        if k == 0 || k % 2 != 0 {
            return Err(Error::InvalidParams(format!(
                "K must be a positive even integer, got {k}"
            )));
        }
        if m == 0 {
            return Err(Error::InvalidParams("M must be positive".into()));
        }
        // Square QAM: order is an even power of two.
        if order < 4 || !order.is_power_of_two() || order.trailing_zeros() % 2 != 0 {
            return Err(Error::InvalidParams(format!(
                "constellation order must be a square QAM size (4, 16, 64, ...), got {order}"
            )));
        }
        if let FilterKind::Custom(taps) = &filter {
            if taps.len() != k * m {
                return Err(Error::InvalidParams(format!(
                    "custom filter needs {} taps, got {}",
                    k * m,
                    taps.len()
                )));
            }
        }
        Ok(Self {
            k,
            m,
            order,
            filter,
        })
    }

    /// The evaluated configuration: K=2, M=3, QPSK, Martin filter.
    pub fn table1() -> Self {
        Self::new(2, 3, 4, FilterKind::Martin).expect("table 1 parameters are valid")
    }

    pub fn subcarriers(&self) -> usize {
        self.k
    }

    pub fn subsymbols(&self) -> usize {
        self.m
    }

    /// Data symbols per frame, `K * M`.
    pub fn n(&self) -> usize {
        self.k * self.m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn filter(&self) -> &FilterKind {
        &self.filter
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.order.trailing_zeros() as usize
    }

    pub fn bits_per_frame(&self) -> usize {
        self.n() * self.bits_per_symbol()
    }

    /// Zero-pad length that turns circular into linear filtering: `KM - K/2`.
    pub fn zero_pad_len(&self) -> usize {
        self.k * self.m - self.k / 2
    }

    /// Linear GFDM transmit length `L_x = 2KM - K/2`.
    pub fn linear_len(&self) -> usize {
        self.n() + self.zero_pad_len()
    }
}

/// Published overlap-factor coefficients of the frequency-sampling design.
fn martin_coefficients(m: usize) -> Option<&'static [f64]> {
    const M2: [f64; 2] = [1.0, std::f64::consts::FRAC_1_SQRT_2];
    const M3: [f64; 3] = [1.0, 0.911438, 0.411438];
    const M4: [f64; 4] = [1.0, 0.971960, std::f64::consts::FRAC_1_SQRT_2, 0.235147];
    match m {
        2 => Some(&M2),
        3 => Some(&M3),
        4 => Some(&M4),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrototypeFilter {
    taps: Vec<f64>,
    base_length: usize,
}

impl PrototypeFilter {
    /// Wraps unpadded taps as given, without normalization.
    pub fn from_taps(taps: Vec<f64>) -> Self {
        let base_length = taps.len();
        Self { taps, base_length }
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn base_length(&self) -> usize {
        self.base_length
    }

    pub fn padded_length(&self) -> usize {
        self.taps.len()
    }

    pub fn zero_pad_len(&self) -> usize {
        self.taps.len() - self.base_length
    }

    pub fn is_padded(&self) -> bool {
        self.taps.len() > self.base_length
    }

    pub fn energy(&self) -> f64 {
        self.taps.iter().map(|t| t * t).sum()
    }
}

fn normalized(taps: Vec<f64>) -> Result<Vec<f64>> {
    let energy: f64 = taps.iter().map(|t| t * t).sum();
    if !(energy > 0.0) || !energy.is_finite() {
        return Err(Error::UnsupportedFilter(
            "filter taps must have finite, non-zero energy".into(),
        ));
    }
    let scale = energy.sqrt().recip();
    Ok(taps.into_iter().map(|t| t * scale).collect())
}

/// Unit-energy prototype filter of length `K * M`, not yet padded.
///
/// The Martin design is the frequency-sampling synthesis
/// `p[n] = P0 + 2 Σ_l (-1)^l P_l cos(2π l n / KM)` for `n = 0..KM`, which peaks at
/// sample `KM/2` and is even-symmetric around it (`p[n] = p[KM - n]`).
pub fn build_prototype_filter(params: &WaveformParams) -> Result<PrototypeFilter> {
    let len = params.n();
    let taps = match params.filter() {
        FilterKind::Martin => {
            let coeffs = martin_coefficients(params.subsymbols()).ok_or_else(|| {
                Error::UnsupportedFilter(format!(
                    "martin filter has no coefficient table for M = {}",
                    params.subsymbols()
                ))
            })?;
            (0..len)
                .map(|n| {
                    coeffs[0]
                        + 2.0
                            * coeffs
                                .iter()
                                .enumerate()
                                .skip(1)
                                .map(|(l, p)| {
                                    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                                    sign * p * (2.0 * PI * (l * n) as f64 / len as f64).cos()
                                })
                                .sum::<f64>()
                })
                .collect()
        }
        FilterKind::Rect => {
            let k = params.subcarriers();
            (0..len).map(|n| if n < k { 1.0 } else { 0.0 }).collect()
        }
        FilterKind::Custom(taps) => taps.clone(),
    };
    Ok(PrototypeFilter::from_taps(normalized(taps)?))
}

/// Appends `KM - K/2` zeros so shifts of the filter become linear.
pub fn zero_pad(filter: &PrototypeFilter, params: &WaveformParams) -> Result<PrototypeFilter> {
    if filter.is_padded() {
        return Err(Error::InvalidParams("filter is already zero padded".into()));
    }
    if filter.base_length() != params.n() {
        return Err(Error::DimensionMismatch(format!(
            "filter has {} taps, expected K*M = {}",
            filter.base_length(),
            params.n()
        )));
    }
    if params.subcarriers() % 2 != 0 {
        return Err(Error::InvalidParams("K must be even to zero pad".into()));
    }
    let mut taps = filter.taps.clone();
    taps.resize(params.linear_len(), 0.0);
    Ok(PrototypeFilter {
        taps,
        base_length: filter.base_length,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixComponent {
    /// Plain (circular) GFDM matrix.
    Full,
    InPhase,
    Quadrature,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulationMatrix {
    matrix: CMatrix,
    component: MatrixComponent,
}

impl ModulationMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn component(&self) -> MatrixComponent {
        self.component
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }
}

/// Builds the transmit matrix with columns ordered `k` fastest, `m` slowest.
///
/// An unpadded filter yields a plain GFDM matrix (`N x N`, shifts circular
/// modulo `N`, subcarrier modulation `exp(j2πkn/K)`). A zero-padded filter yields
/// a Linear GFDM component matrix (`L_x x N`, shifts `mK + time_shift` linear
/// with truncation) that additionally carries the OQAM phase `exp(jπk/2)`;
/// `time_shift = 0` is the in-phase matrix and `time_shift = K/2` the quadrature one.
pub fn assemble_modulation_matrix(
    filter: &PrototypeFilter,
    params: &WaveformParams,
    time_shift: usize,
) -> Result<ModulationMatrix> {
    let (k_count, m_count, n) = (params.subcarriers(), params.subsymbols(), params.n());
    if filter.base_length() != n {
        return Err(Error::DimensionMismatch(format!(
            "filter has {} base taps, expected K*M = {n}",
            filter.base_length()
        )));
    }
    let taps = filter.taps();
    let rows = taps.len();
    if time_shift >= rows {
        return Err(Error::DimensionMismatch(format!(
            "time shift {time_shift} exceeds {rows} rows"
        )));
    }

    let linear = filter.is_padded();
    let component = match (linear, time_shift) {
        (false, _) => MatrixComponent::Full,
        (true, 0) => MatrixComponent::InPhase,
        (true, _) => MatrixComponent::Quadrature,
    };
    let mut matrix = CMatrix::zeros(rows, n);
    for m in 0..m_count {
        for k in 0..k_count {
            let col = m * k_count + k;
            let offset = m * k_count + time_shift;
            let phase0 = if linear { FRAC_PI_2 * k as f64 } else { 0.0 };
            for (i, &tap) in taps.iter().enumerate() {
                if tap == 0.0 {
                    continue;
                }
                let row = if linear {
                    let row = i + offset;
                    if row >= rows {
                        break;
                    }
                    row
                } else {
                    (i + offset) % rows
                };
                let phase = 2.0 * PI * ((k * row) % k_count) as f64 / k_count as f64 + phase0;
                matrix[(row, col)] = Complex64::from_polar(tap, phase);
            }
        }
    }
    Ok(ModulationMatrix { matrix, component })
}

/// In-phase and quadrature Linear GFDM matrices for `params`.
pub fn linear_gfdm_matrices(params: &WaveformParams) -> Result<(ModulationMatrix, ModulationMatrix)> {
    let filter = zero_pad(&build_prototype_filter(params)?, params)?;
    let a_i = assemble_modulation_matrix(&filter, params, 0)?;
    let a_q = assemble_modulation_matrix(&filter, params, params.subcarriers() / 2)?;
    Ok((a_i, a_q))
}

/// Gray-labeled square QAM with unit average energy.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolAlphabet {
    points: Vec<Complex64>,
    component_i: Vec<f64>,
    component_q: Vec<f64>,
    bits_per_axis: usize,
}

impl SymbolAlphabet {
    pub fn qam(order: usize) -> Result<Self> {
        if order < 4 || !order.is_power_of_two() || order.trailing_zeros() % 2 != 0 {
            return Err(Error::InvalidParams(format!(
                "constellation order must be a square QAM size, got {order}"
            )));
        }
        let bits_per_axis = order.trailing_zeros() as usize / 2;
        let side = 1usize << bits_per_axis;
        let scale = (3.0 / (2.0 * (order as f64 - 1.0))).sqrt();
        // Gray word -> amplitude, where word 0 maps to the most positive level.
        let mut level_of_word = vec![0.0; side];
        for i in 0..side {
            let gray = i ^ (i >> 1);
            level_of_word[gray] = (side as f64 - 1.0 - 2.0 * i as f64) * scale;
        }
        // Label = I word (high bits) followed by Q word (low bits).
        let points = (0..order)
            .map(|label| {
                let wi = label >> bits_per_axis;
                let wq = label & (side - 1);
                Complex64::new(level_of_word[wi], level_of_word[wq])
            })
            .collect();
        let mut levels: Vec<f64> = level_of_word.clone();
        levels.sort_by(|a, b| a.total_cmp(b));
        Ok(Self {
            points,
            component_i: levels.clone(),
            component_q: levels,
            bits_per_axis,
        })
    }

    /// Point for each label, indexed by the integer value of its bit word.
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Real-part alphabet, ascending.
    pub fn component_i(&self) -> &[f64] {
        &self.component_i
    }

    /// Imaginary-part alphabet, ascending.
    pub fn component_q(&self) -> &[f64] {
        &self.component_q
    }

    pub fn bits_per_symbol(&self) -> usize {
        2 * self.bits_per_axis
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    /// Label of the nearest constellation point.
    pub fn nearest_label(&self, z: Complex64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (label, p) in self.points.iter().enumerate() {
            let d = (z - p).norm_sqr();
            if d < best_d {
                best = label;
                best_d = d;
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataFrame {
    symbols: Vec<Complex64>,
    bits: Vec<u8>,
}

impl DataFrame {
    pub fn symbols(&self) -> &[Complex64] {
        &self.symbols
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn real_part(&self) -> Vec<f64> {
        self.symbols.iter().map(|s| s.re).collect()
    }

    pub fn imag_part(&self) -> Vec<f64> {
        self.symbols.iter().map(|s| s.im).collect()
    }

    /// Frame from symbols that are already alphabet members (e.g. receiver
    /// decisions); the bits are recovered by demapping.
    pub fn from_symbols(symbols: Vec<Complex64>, alphabet: &SymbolAlphabet) -> Self {
        let mut frame = Self {
            symbols,
            bits: Vec::new(),
        };
        frame.bits = demap_frame(&frame, alphabet);
        frame
    }
}

/// Maps bits MSB-first per symbol onto the Gray-labeled constellation.
pub fn map_bits(bits: &[u8], alphabet: &SymbolAlphabet, params: &WaveformParams) -> Result<DataFrame> {
    let per_symbol = alphabet.bits_per_symbol();
    let expected = params.n() * per_symbol;
    if bits.len() != expected {
        return Err(Error::BitCount {
            expected,
            actual: bits.len(),
        });
    }
    let symbols = bits
        .chunks(per_symbol)
        .map(|chunk| {
            let label = chunk.iter().fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize);
            alphabet.points()[label]
        })
        .collect();
    Ok(DataFrame {
        symbols,
        bits: bits.to_vec(),
    })
}

/// Hard nearest-point demapping back to bits.
pub fn demap_frame(frame: &DataFrame, alphabet: &SymbolAlphabet) -> Vec<u8> {
    let per_symbol = alphabet.bits_per_symbol();
    let mut bits = Vec::with_capacity(frame.symbols.len() * per_symbol);
    for &s in &frame.symbols {
        let label = alphabet.nearest_label(s);
        for b in (0..per_symbol).rev() {
            bits.push(((label >> b) & 1) as u8);
        }
    }
    bits
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransmitSignal {
    samples: Vec<Complex64>,
    in_phase: Vec<Complex64>,
    quadrature: Vec<Complex64>,
}

impl TransmitSignal {
    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn in_phase(&self) -> &[Complex64] {
        &self.in_phase
    }

    pub fn quadrature(&self) -> &[Complex64] {
        &self.quadrature
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// `x = A d`, with `x_I = A Re{d}` and `x_Q = j A Im{d}`.
pub fn modulate_gfdm(frame: &DataFrame, a: &ModulationMatrix) -> Result<TransmitSignal> {
    modulate_linear_gfdm(frame, a, a)
}

/// `x = A_I Re{d} + j A_Q Im{d}`.
pub fn modulate_linear_gfdm(
    frame: &DataFrame,
    a_i: &ModulationMatrix,
    a_q: &ModulationMatrix,
) -> Result<TransmitSignal> {
    if a_i.rows() != a_q.rows() {
        return Err(Error::DimensionMismatch(format!(
            "A_I has {} rows, A_Q has {}",
            a_i.rows(),
            a_q.rows()
        )));
    }
    let in_phase = a_i.matrix().mul_real_vec(&frame.real_part())?;
    let quadrature: Vec<Complex64> = a_q
        .matrix()
        .mul_real_vec(&frame.imag_part())?
        .into_iter()
        .map(|z| Complex64::i() * z)
        .collect();
    let samples = in_phase.iter().zip(&quadrature).map(|(a, b)| a + b).collect();
    Ok(TransmitSignal {
        samples,
        in_phase,
        quadrature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn qpsk() -> SymbolAlphabet {
        SymbolAlphabet::qam(4).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(WaveformParams::new(3, 2, 4, FilterKind::Martin).is_err());
        assert!(WaveformParams::new(0, 2, 4, FilterKind::Martin).is_err());
        assert!(WaveformParams::new(2, 0, 4, FilterKind::Martin).is_err());
        assert!(WaveformParams::new(2, 3, 8, FilterKind::Martin).is_err());
        assert!(WaveformParams::new(2, 3, 2, FilterKind::Martin).is_err());
        assert!(WaveformParams::new(2, 3, 4, FilterKind::Custom(vec![1.0; 5])).is_err());
        let p = WaveformParams::table1();
        assert_eq!(p.n(), 6);
        assert_eq!(p.bits_per_frame(), 12);
        assert_eq!(p.linear_len(), 11);
    }

    #[test]
    fn rect_filter_k2_m1() {
        let p = WaveformParams::new(2, 1, 4, FilterKind::Rect).unwrap();
        let f = build_prototype_filter(&p).unwrap();
        assert_eq!(f.taps().len(), 2);
        for t in f.taps() {
            assert!((t - FRAC_1_SQRT_2).abs() < 1e-15);
        }
    }

    #[test]
    fn martin_filter_shape() {
        for (k, m) in [(2, 3), (4, 3), (2, 2), (8, 4)] {
            let p = WaveformParams::new(k, m, 4, FilterKind::Martin).unwrap();
            let f = build_prototype_filter(&p).unwrap();
            let taps = f.taps();
            let len = k * m;
            assert_eq!(taps.len(), len);
            assert!((f.energy() - 1.0).abs() < 1e-12);
            // even symmetry around the peak sample KM/2
            for n in 1..len {
                assert!((taps[n] - taps[len - n]).abs() < 1e-9, "K={k} M={m} n={n}");
            }
            let peak = taps
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .unwrap()
                .0;
            assert_eq!(peak, len / 2);
        }
    }

    #[test]
    fn martin_unsupported_overlap() {
        let p = WaveformParams::new(2, 5, 4, FilterKind::Martin).unwrap();
        assert!(matches!(
            build_prototype_filter(&p),
            Err(Error::UnsupportedFilter(_))
        ));
    }

    #[test]
    fn zero_pad_lengths() {
        for (k, m, lz, total) in [(2, 3, 5, 11), (4, 5, 18, 38), (2, 1, 1, 3)] {
            let p = WaveformParams::new(k, m, 4, FilterKind::Rect).unwrap();
            let f = build_prototype_filter(&p).unwrap();
            let padded = zero_pad(&f, &p).unwrap();
            assert_eq!(padded.zero_pad_len(), lz);
            assert_eq!(padded.padded_length(), total);
            assert!(padded.taps()[k * m..].iter().all(|&t| t == 0.0));
            assert!((padded.energy() - f.energy()).abs() < 1e-15);
            assert!(zero_pad(&padded, &p).is_err());
        }
    }

    #[test]
    fn ofdm_corner_case_is_unitary() {
        let p = WaveformParams::new(2, 1, 4, FilterKind::Rect).unwrap();
        let a = assemble_modulation_matrix(&build_prototype_filter(&p).unwrap(), &p, 0).unwrap();
        assert_eq!(a.component(), MatrixComponent::Full);
        let aah = a.matrix().matmul(&a.matrix().conj_transpose()).unwrap();
        let eye = CMatrix::identity(2);
        for r in 0..2 {
            for c in 0..2 {
                assert!((aah[(r, c)] - eye[(r, c)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn ofdm_corner_case_modulation() {
        let p = WaveformParams::new(2, 1, 4, FilterKind::Rect).unwrap();
        let a = assemble_modulation_matrix(&build_prototype_filter(&p).unwrap(), &p, 0).unwrap();
        let frame = DataFrame {
            symbols: vec![Complex64::new(1.0, 0.0); 2],
            bits: vec![],
        };
        let x = modulate_gfdm(&frame, &a).unwrap();
        let expect = [Complex64::new(2.0 * FRAC_1_SQRT_2, 0.0), Complex64::new(0.0, 0.0)];
        for (got, want) in x.samples().iter().zip(expect) {
            assert!((got - want).norm() < 1e-12);
        }
    }

    #[test]
    fn linear_gfdm_table1_shape() {
        let p = WaveformParams::table1();
        let (a_i, a_q) = linear_gfdm_matrices(&p).unwrap();
        assert_eq!((a_i.rows(), a_i.cols()), (11, 6));
        assert_eq!(a_i.component(), MatrixComponent::InPhase);
        assert_eq!(a_q.component(), MatrixComponent::Quadrature);
        // column (0,0): nonzero entries only within rows 0..=5, and rows 1..=5 populated
        let col = a_i.matrix().column(0);
        assert!(col[6..].iter().all(|z| z.norm() == 0.0));
        assert!(col[1..6].iter().all(|z| z.norm() > 1e-3));
        for c in 0..6 {
            assert!((a_i.matrix().column_norm(c) - 1.0).abs() < 1e-12);
            assert!((a_q.matrix().column_norm(c) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn quadrature_is_shifted_in_phase() {
        let p = WaveformParams::new(4, 3, 4, FilterKind::Martin).unwrap();
        let (a_i, a_q) = linear_gfdm_matrices(&p).unwrap();
        let half = p.subcarriers() / 2;
        for c in 0..p.n() {
            for i in 0..a_i.rows() - half {
                let diff = a_q.matrix()[(i + half, c)].norm() - a_i.matrix()[(i, c)].norm();
                assert!(diff.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn oqam_basis_is_nearly_real_orthogonal() {
        let p = WaveformParams::table1();
        let (a_i, a_q) = linear_gfdm_matrices(&p).unwrap();
        let n = p.n();
        let basis: Vec<Vec<Complex64>> = (0..n)
            .map(|c| a_i.matrix().column(c))
            .chain((0..n).map(|c| {
                a_q.matrix()
                    .column(c)
                    .into_iter()
                    .map(|z| Complex64::i() * z)
                    .collect()
            }))
            .collect();
        for (u, bu) in basis.iter().enumerate() {
            for (v, bv) in basis.iter().enumerate() {
                let ip: Complex64 = bu.iter().zip(bv).map(|(a, b)| a.conj() * b).sum();
                let want = if u == v { 1.0 } else { 0.0 };
                assert!((ip.re - want).abs() < 1e-2, "u={u} v={v} re={}", ip.re);
            }
        }
    }

    #[test]
    fn zero_taps_give_zero_matrix() {
        let p = WaveformParams::table1();
        let f = zero_pad(&PrototypeFilter::from_taps(vec![0.0; 6]), &p).unwrap();
        let a = assemble_modulation_matrix(&f, &p, 0).unwrap();
        assert_eq!(a.matrix().max_abs(), 0.0);
    }

    #[test]
    fn assemble_errors() {
        let p = WaveformParams::table1();
        let short = PrototypeFilter::from_taps(vec![1.0; 4]);
        assert!(assemble_modulation_matrix(&short, &p, 0).is_err());
        let f = build_prototype_filter(&p).unwrap();
        assert!(assemble_modulation_matrix(&f, &p, 6).is_err());
    }

    #[test]
    fn qpsk_alphabet() {
        let a = qpsk();
        assert_eq!(a.component_i(), &[-FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        assert_eq!(a.component_q(), &[-FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        let params = WaveformParams::new(2, 1, 4, FilterKind::Rect).unwrap();
        let f = map_bits(&[0, 0, 1, 1], &a, &params).unwrap();
        assert_eq!(f.symbols()[0], Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2));
        assert_eq!(f.symbols()[1], Complex64::new(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2));
    }

    #[test]
    fn qam_energy_and_components() {
        for order in [4, 16, 64] {
            let a = SymbolAlphabet::qam(order).unwrap();
            let mean: f64 = a.points().iter().map(|p| p.norm_sqr()).sum::<f64>() / order as f64;
            assert!((mean - 1.0).abs() < 1e-12);
            for p in a.points() {
                assert!(a.component_i().contains(&p.re));
                assert!(a.component_q().contains(&p.im));
            }
            assert!(a.component_i().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn gray_neighbours_differ_in_one_bit() {
        let a = SymbolAlphabet::qam(16).unwrap();
        let min_d = a.component_i()[1] - a.component_i()[0];
        for (la, pa) in a.points().iter().enumerate() {
            for (lb, pb) in a.points().iter().enumerate() {
                if ((pa - pb).norm() - min_d).abs() < 1e-9 {
                    assert_eq!((la ^ lb).count_ones(), 1);
                }
            }
        }
    }

    #[test]
    fn wrong_bit_count() {
        let p = WaveformParams::table1();
        assert!(matches!(
            map_bits(&[0; 11], &qpsk(), &p),
            Err(Error::BitCount { expected: 12, actual: 11 })
        ));
    }

    #[test]
    fn split_modulation_components() {
        let p = WaveformParams::table1();
        let (a_i, a_q) = linear_gfdm_matrices(&p).unwrap();
        let real = DataFrame {
            symbols: vec![Complex64::new(0.7, 0.0); 6],
            bits: vec![],
        };
        let x = modulate_linear_gfdm(&real, &a_i, &a_q).unwrap();
        assert!(x.quadrature().iter().all(|z| z.norm() == 0.0));
        assert_eq!(x.samples(), x.in_phase());
        let imag = DataFrame {
            symbols: vec![Complex64::new(0.0, -0.7); 6],
            bits: vec![],
        };
        let x = modulate_linear_gfdm(&imag, &a_i, &a_q).unwrap();
        assert!(x.in_phase().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn unit_vector_selects_column() {
        let p = WaveformParams::table1();
        let (a_i, _) = linear_gfdm_matrices(&p).unwrap();
        let plain = assemble_modulation_matrix(&build_prototype_filter(&p).unwrap(), &p, 0).unwrap();
        for c in 0..6 {
            let mut symbols = vec![Complex64::new(0.0, 0.0); 6];
            symbols[c] = Complex64::new(1.0, 0.0);
            let frame = DataFrame { symbols, bits: vec![] };
            let x = modulate_gfdm(&frame, &plain).unwrap();
            assert_eq!(x.samples(), plain.matrix().column(c).as_slice());
            let x = modulate_linear_gfdm(&frame, &a_i, &a_i).unwrap();
            assert_eq!(x.samples(), a_i.matrix().column(c).as_slice());
        }
    }
}
