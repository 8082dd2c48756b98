/// xorshift64* (Vigna): shifts 12, 25, 27 and multiplier
/// `0x2545F4914F6CDD1D`. A zero seed is replaced by `0x9E3779B97F4A7C15`
/// since the all-zero state is a fixed point.
///
/// Consumption order in a trial: all symbols first (one draw each, top six
/// bits), then one Box–Muller pair per half-sample (two draws, real part
/// from the cosine branch, imaginary from the sine branch).
#[derive(Clone, Debug)]
pub struct XorShift64Star {
    state: u64,
}

pub const MULTIPLIER: u64 = 0x2545_F491_4F6C_DD1D;
pub const ZERO_SEED_REPLACEMENT: u64 = 0x9E37_79B9_7F4A_7C15;

impl XorShift64Star {
    pub fn new(seed: u64) -> Self {
        let state = if seed == 0 { ZERO_SEED_REPLACEMENT } else { seed };
        XorShift64Star { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(MULTIPLIER)
    }

    pub fn next_symbol(&mut self) -> u8 {
        (self.next_u64() >> 58) as u8
    }

    /// Uniform in the open interval (0, 1).
    pub fn next_unit(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (-53f64).exp2()
    }

    /// Two independent standard normals.
    pub fn gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.next_unit();
        let u2 = self.next_unit();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        (r * theta.cos(), r * theta.sin())
    }
}
