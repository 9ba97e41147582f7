use num_complex::Complex64;

/// Compensated complex accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: Complex64,
    comp: Complex64,
}

impl Neumaier {
    pub fn add(&mut self, x: Complex64) {
        let two_sum = |s: &mut f64, c: &mut f64, v: f64| {
            let t = *s + v;
            if s.abs() >= v.abs() {
                *c += (*s - t) + v;
            } else {
                *c += (v - t) + *s;
            }
            *s = t;
        };
        two_sum(&mut self.sum.re, &mut self.comp.re, x.re);
        two_sum(&mut self.sum.im, &mut self.comp.im, x.im);
    }

    pub fn total(&self) -> Complex64 {
        self.sum + self.comp
    }
}
