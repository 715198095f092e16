//! Compensated (Kahan–Babuška/Neumaier) accumulation.

use num_complex::Complex;

use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct KahanSum<T> {
    sum: T,
    comp: T,
}

impl<T: Real> Default for KahanSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> KahanSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

impl<T: Real> std::iter::FromIterator<T> for KahanSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Component-wise compensated sum of complex values.
#[derive(Debug, Clone, Copy)]
pub struct ComplexKahanSum<T> {
    re: KahanSum<T>,
    im: KahanSum<T>,
}

impl<T: Real> Default for ComplexKahanSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> ComplexKahanSum<T> {
    pub fn new() -> Self {
        Self {
            re: KahanSum::new(),
            im: KahanSum::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, z: Complex<T>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}

/// Compensated sum of a real slice.
pub fn kahan<T: Real>(xs: &[T]) -> T {
    xs.iter().copied().collect::<KahanSum<T>>().value()
}
