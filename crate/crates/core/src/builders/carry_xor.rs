use super::emit::{d, inv, Emitter};
use crate::ir::{ClassicalExpr, Control, Qubit};

/// Emit `dirty[j] ^= c_{j+1}` for `j < w`, where `c` are the carries of the
/// addition `target + d + carry_in` over the `w = target.len()` bits given.
///
/// The dirty qubits may hold arbitrary values; they serve as both workspace and
/// output. With `complement` set, the carries are those of `~target + d + carry_in`,
/// which equal the carries of the addition that produced `target`.
///
/// Structure: a descending Toffoli ladder, the per-bit `d_k` corrections, the
/// carry-in Toffoli, then an ascending ladder; `2w - 1` Toffolis in total.
/// Target and carry-in are only ever used as controls.
pub(crate) fn emit_carry_xor(
    e: &mut Emitter,
    target: &[Qubit],
    carry_in: Qubit,
    dirty: &[Qubit],
    offset_base: u32,
    complement: bool,
) {
    let w = target.len();
    assert!(
        w >= 1 && dirty.len() >= w,
        "carry-xor needs one dirty qubit per target bit"
    );
    let g = dirty;
    // Fires when the (possibly complemented) target bit differs from d_k.
    let tp = |k: usize| -> Control {
        let pol: ClassicalExpr = inv(offset_base + k as u32).xor_constant(complement);
        Control::with_polarity(target[k], pol)
    };

    for k in (1..w).rev() {
        e.ccx(Control::on(g[k - 1]), tp(k), g[k]);
    }
    for (k, &gk) in g.iter().enumerate().take(w) {
        e.x_if(gk, d(offset_base + k as u32));
    }
    e.ccx(Control::with_polarity(carry_in, inv(offset_base)), tp(0), g[0]);
    for k in 1..w {
        e.ccx(
            Control::with_polarity(g[k - 1], inv(offset_base + k as u32)),
            tp(k),
            g[k],
        );
    }
}
