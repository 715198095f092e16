use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Scaled complementary error function `exp(x^2) erfc(x)`.
pub fn erfcx(x: f64) -> f64 {
    if x < 0.0 {
        // erfcx(-y) = 2 exp(y^2) - erfcx(y)
        let y2 = x * x;
        let lo = x.mul_add(x, -y2);
        return 2.0 * y2.exp() * lo.exp() - erfcx(-x);
    }
    if x < 25.0 {
        let y2 = x * x;
        let lo = x.mul_add(x, -y2);
        return y2.exp() * lo.exp() * libm::erfc(x);
    }
    // Asymptotic series 1/(x sqrt(pi)) * sum (-1)^k (2k-1)!! / (2x^2)^k
    let inv = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..12 {
        term *= -((2 * k - 1) as f64) * inv;
        sum += term;
    }
    sum / (x * SQRT_PI)
}

/// Faddeeva function `w(z) = exp(-z^2) erfc(-iz)`.
///
/// Continued fraction far from the origin, Zaghloul–Ali style exponential
/// sums elsewhere.
pub fn faddeeva(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return 2.0 * (-z * z).exp() - faddeeva(-z);
    }
    let (x, y) = (z.re, z.im);
    if x == 0.0 {
        return Complex64::new(erfcx(y), 0.0);
    }
    let ax = x.abs();
    if y > 7.0 || (ax > 6.0 && y > 0.1) || (ax > 8.0 && y > 1e-10) || ax > 28.0 {
        continued_fraction(z)
    } else {
        exponential_sums(x, y)
    }
}

fn continued_fraction(z: Complex64) -> Complex64 {
    let (ax, y) = (z.re.abs(), z.im);
    let nu = (3.9 + 11.398 / (0.08254 * ax + 0.1421 * y + 0.2023)).floor();
    let mut w = z;
    let mut coef = 0.5 * (nu - 1.0);
    while coef > 0.4 {
        w = z - coef / w;
        coef -= 0.5;
    }
    Complex64::new(0.0, 1.0 / SQRT_PI) / w
}

fn sinc(x: f64, sinx: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        sinx / x
    }
}

/// Region `0 <= y`, moderate `|x|`.
fn exponential_sums(x: f64, y: f64) -> Complex64 {
    const A: f64 = 0.518_321_480_430_085_9;
    const C: f64 = 0.329_973_702_884_629_1; // 2a/pi
    const A2: f64 = A * A;
    let ax = x.abs();
    let expx2 = (-ax * ax).exp();
    let (mut s1, mut s2, mut s3, mut s54) = (0.0, 0.0, 0.0, 0.0);
    for n in 1..400 {
        let an = A * n as f64;
        let denom = A2 * (n * n) as f64 + y * y;
        let plus = (-(an - ax) * (an - ax)).exp() / denom;
        let minus = (-(an + ax) * (an + ax)).exp() / denom;
        s1 += (-an * an).exp() * expx2 / denom;
        s2 += minus;
        s3 += plus;
        s54 += an * (plus - minus);
        if an * plus < 1e-17 * s54 && an > ax {
            break;
        }
    }
    let expx2erfcxy = expx2 * erfcx(y);
    let (re, im) = if y > 5.0 {
        let sinxy = (ax * y).sin();
        (
            (expx2erfcxy - C * y * s1) * (2.0 * ax * y).cos()
                + C * ax * expx2 * sinxy * sinc(ax * y, sinxy),
            0.0,
        )
    } else {
        let xy = x * y;
        let sinxy = xy.sin();
        let sin2xy = (2.0 * xy).sin();
        let cos2xy = (2.0 * xy).cos();
        let coef1 = expx2erfcxy - C * y * s1;
        let coef2 = C * x * expx2;
        (
            coef1 * cos2xy + coef2 * sinxy * sinc(xy, sinxy),
            coef2 * sinc(2.0 * xy, sin2xy) - coef1 * sin2xy,
        )
    };
    Complex64::new(re + 0.5 * C * y * (s2 + s3), im + 0.5 * C * s54.copysign(x))
}

/// Standard normal distribution function on the real line.
pub fn normal_cdf_real(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Entire continuation of `(2 pi)^{-1/2} int_{-inf}^a exp(-t^2/2) dt`.
pub fn normal_cdf(a: Complex64) -> Complex64 {
    if a.im == 0.0 {
        return Complex64::new(normal_cdf_real(a.re), 0.0);
    }
    if a.re > 0.0 {
        return 1.0 - normal_cdf(-a);
    }
    let arg = Complex64::new(a.im, -a.re) * FRAC_1_SQRT_2; // -i a / sqrt 2
    0.5 * (-a * a * 0.5).exp() * faddeeva(arg)
}
