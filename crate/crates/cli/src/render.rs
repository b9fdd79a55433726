//! Text formatting shared by the commands.

use attrkit::rational::format_q;
use attrkit::report::format_sig17;
use attrkit::Q;

pub fn q(x: &Q) -> String {
    format_q(x)
}

pub fn qs(v: &[Q]) -> String {
    format!("[{}]", v.iter().map(format_q).collect::<Vec<_>>().join(", "))
}

pub fn f(x: f64) -> String {
    format_sig17(x)
}

pub fn fs(v: &[f64]) -> String {
    format!("[{}]", v.iter().map(|x| format_sig17(*x)).collect::<Vec<_>>().join(", "))
}

pub fn basis(a: usize) -> String {
    format!("J{}", a + 1)
}
