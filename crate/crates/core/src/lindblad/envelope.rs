use num_complex::Complex64 as C64;

/// Time dependence multiplying one Hamiltonian term.
///
/// Times and frequencies are in units of the model's reference rate.
#[derive(Debug, Clone, PartialEq)]
pub enum Envelope {
    Constant,
    /// `e^{-i·freq·t}`; a negative `freq` gives `e^{+i|freq|t}`.
    Oscillating {
        freq: f64,
    },
    /// `amplitude · exp[−(t − center)² / (2 width²)]`
    Gaussian {
        amplitude: f64,
        center: f64,
        width: f64,
    },
    Product(Vec<Envelope>),
}

impl Envelope {
    /// `e^{∓iΔt}` with `sign = +1` giving `e^{−iΔt}`.
    pub fn complex_exponential(delta: f64, sign: i8) -> Self {
        Envelope::Oscillating {
            freq: if sign >= 0 { delta } else { -delta },
        }
    }

    pub fn eval(&self, t: f64) -> C64 {
        match self {
            Envelope::Constant => C64::new(1.0, 0.0),
            Envelope::Oscillating { freq } => C64::from_polar(1.0, -freq * t),
            Envelope::Gaussian {
                amplitude,
                center,
                width,
            } => {
                let x = t - center;
                C64::new(amplitude * (-x * x / (2.0 * width * width)).exp(), 0.0)
            }
            Envelope::Product(parts) => parts.iter().map(|p| p.eval(t)).product(),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Envelope::Oscillating { freq } => Envelope::Oscillating { freq: -freq },
            Envelope::Product(parts) => Envelope::Product(parts.iter().map(Envelope::conj).collect()),
            other => other.clone(),
        }
    }

    /// True when the envelope takes only real values.
    pub fn is_real(&self) -> bool {
        match self {
            Envelope::Constant | Envelope::Gaussian { .. } => true,
            Envelope::Oscillating { freq } => *freq == 0.0,
            Envelope::Product(parts) => parts.iter().map(Envelope::net_freq).sum::<f64>() == 0.0,
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Envelope::Constant => true,
            Envelope::Oscillating { freq } => *freq == 0.0,
            Envelope::Gaussian { .. } => false,
            Envelope::Product(parts) => parts.iter().all(Envelope::is_constant),
        }
    }

    /// Upper bound of `|eval(t)|` over all t.
    pub fn max_magnitude(&self) -> f64 {
        match self {
            Envelope::Constant | Envelope::Oscillating { .. } => 1.0,
            Envelope::Gaussian { amplitude, .. } => amplitude.abs(),
            Envelope::Product(parts) => parts.iter().map(Envelope::max_magnitude).product(),
        }
    }

    pub(crate) fn net_freq(&self) -> f64 {
        match self {
            Envelope::Oscillating { freq } => *freq,
            Envelope::Product(parts) => parts.iter().map(Envelope::net_freq).sum(),
            _ => 0.0,
        }
    }

    /// Magnitude of the carrier frequency.
    pub fn frequency(&self) -> f64 {
        self.net_freq().abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gaussian_peak_and_width() {
        let g = Envelope::Gaussian {
            amplitude: 0.1,
            center: 110.0,
            width: 90.0,
        };
        assert!((g.eval(110.0).re - 0.1).abs() < 1e-15);
        let one_sigma = g.eval(200.0).re;
        assert!((one_sigma - 0.1 * (-0.5f64).exp()).abs() < 1e-15);
        assert!(g.is_real() && !g.is_constant());
    }

    #[test]
    fn product_of_gaussian_and_phase_conjugates() {
        let e = Envelope::Product(vec![
            Envelope::Gaussian {
                amplitude: 2.0,
                center: 0.0,
                width: 1.0,
            },
            Envelope::complex_exponential(3.0, 1),
        ]);
        let t = 0.7;
        assert!((e.conj().eval(t) - e.eval(t).conj()).norm() < 1e-15);
        assert_eq!(e.frequency(), 3.0);
        assert!(!e.is_real());
    }

    proptest! {
        #[test]
        fn oscillating_has_unit_modulus(delta in -1e3f64..1e3, t in -1e4f64..1e4, sign in prop::bool::ANY) {
            let e = Envelope::complex_exponential(delta, if sign { 1 } else { -1 });
            prop_assert!((e.eval(t).norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn gaussian_is_real_and_positive(amp in 1e-3f64..10.0, mu in -100f64..100.0, w in 0.1f64..100.0, t in -500f64..500.0) {
            let v = Envelope::Gaussian { amplitude: amp, center: mu, width: w }.eval(t);
            prop_assert!(v.im == 0.0);
            prop_assert!(v.re >= 0.0 && v.re <= amp);
        }
    }
}
