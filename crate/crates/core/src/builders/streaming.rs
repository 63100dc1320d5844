use super::emit::{d, inv, Emitter};
use super::VentLedger;
use crate::ir::{Control, Qubit};

/// Wiring for one vented ripple addition into `target`.
pub(crate) struct StreamPlan<'a> {
    pub target: &'a [Qubit],
    pub carry_in: Qubit,
    /// Index of `d_0` for this slice of the offset.
    pub offset_base: u32,
    /// Two clean qubits that alternately hold the running carry.
    pub holders: [Qubit; 2],
    /// When set, the final carry `c_w` is left here instead of being folded
    /// into the top target bit.
    pub carry_out: Option<Qubit>,
    /// When set, each carry `c_k` is xored into `merged[k - 1]` before it is vented.
    pub merged: Option<&'a [Qubit]>,
}

/// Emit `target += d + carry_in` (mod `2^w`), venting every intermediate carry.
///
/// Carry `c_k` (`1 <= k`) lives in `holders[k % 2]`. Each step computes the
/// next carry with one Toffoli using the majority identity
/// `maj(x, d, c) = ((x ^ d) & (c ^ d)) ^ d`, finishes sum bit `k` with a CNOT,
/// then vents the now Z-redundant `c_k`. The returned ledger pairs every vent
/// record with the carry index it deleted.
pub(crate) fn emit_streaming(e: &mut Emitter, plan: &StreamPlan<'_>) -> VentLedger {
    let t = plan.target;
    let w = t.len() as u32;
    let base = plan.offset_base;
    let h = |k: u32| plan.holders[(k % 2) as usize];
    let mut ledger = VentLedger::default();
    assert!(w >= 1, "empty target slice");
    if let Some(m) = plan.merged {
        assert!(m.len() as u32 >= w.saturating_sub(2), "merged span too short");
    }

    // Index of the last carry computed, and where each carry lands.
    let last = if plan.carry_out.is_some() { w } else { w - 1 };
    let dest = |j: u32| -> Qubit {
        if j == last {
            plan.carry_out.unwrap_or(t[w as usize - 1])
        } else {
            h(j)
        }
    };

    for k in 0..w {
        e.x_if(t[k as usize], d(base + k));
    }

    // t_k now holds x_k ^ d_k.
    if last >= 1 {
        e.ccx(
            Control::with_polarity(plan.carry_in, inv(base)),
            Control::on(t[0]),
            dest(1),
        );
    }
    e.cx(Control::on(plan.carry_in), t[0]);

    for k in 1..last {
        // h(k) holds c_k ^ d_{k-1}
        let hk = h(k);
        e.x_if(hk, d(base + k - 1));
        e.ccx(
            Control::with_polarity(hk, inv(base + k)),
            Control::on(t[k as usize]),
            dest(k + 1),
        );
        e.cx(Control::on(hk), t[k as usize]);
        if let Some(m) = plan.merged {
            e.cx(Control::on(hk), m[k as usize - 1]);
        }
        let r = e.vent(hk);
        ledger.entries.push((r, k));
    }

    if last >= 1 {
        e.x_if(dest(last), d(base + last - 1));
    }
    ledger
}
