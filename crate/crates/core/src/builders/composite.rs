use super::carry_xor::emit_carry_xor;
use super::emit::Emitter;
use super::streaming::{emit_streaming, StreamPlan};
use super::VentLedger;
use crate::ir::{ClassicalExpr, Qubit};

/// Discharge vented phases with a single carry-xor, given that the carries
/// were already xored into `dirty` while the addition ran.
///
/// `Z^m` on `g ^ c`, carry-xor back to `g`, `Z^m` on `g` leaves exactly `(-1)^(m c)`.
pub(crate) fn emit_merged_phase_fix(
    e: &mut Emitter,
    ledger: &VentLedger,
    target: &[Qubit],
    carry_in: Qubit,
    dirty: &[Qubit],
    offset_base: u32,
) {
    let w = ledger.max_carry_index() as usize;
    if w == 0 {
        return;
    }
    phase_by_records(e, ledger, dirty);
    emit_carry_xor(e, &target[..w], carry_in, &dirty[..w], offset_base, true);
    phase_by_records(e, ledger, dirty);
}

/// Discharge vented phases with two carry-xors into borrowed `dirty` qubits.
pub(crate) fn emit_double_phase_fix(
    e: &mut Emitter,
    ledger: &VentLedger,
    target: &[Qubit],
    carry_in: Qubit,
    dirty: &[Qubit],
    offset_base: u32,
) {
    let w = ledger.max_carry_index() as usize;
    if w == 0 {
        return;
    }
    phase_by_records(e, ledger, dirty);
    emit_carry_xor(e, &target[..w], carry_in, &dirty[..w], offset_base, true);
    phase_by_records(e, ledger, dirty);
    emit_carry_xor(e, &target[..w], carry_in, &dirty[..w], offset_base, true);
}

/// `Z` on `dirty[k - 1]` conditioned on each vent record for carry `c_k`.
fn phase_by_records(e: &mut Emitter, ledger: &VentLedger, dirty: &[Qubit]) {
    for &(r, k) in &ledger.entries {
        e.z_if(dirty[k as usize - 1], ClassicalExpr::record(r));
    }
}

/// Vented addition with a merged carry-xor, followed by its phase fix.
/// Needs `target.len() - 2` dirty qubits.
pub(crate) fn emit_adder_2clean(
    e: &mut Emitter,
    target: &[Qubit],
    carry_in: Qubit,
    clean: [Qubit; 2],
    dirty: &[Qubit],
) {
    let ledger = emit_streaming(
        e,
        &StreamPlan {
            target,
            carry_in,
            offset_base: 0,
            holders: clean,
            carry_out: None,
            merged: Some(dirty),
        },
    );
    emit_merged_phase_fix(e, &ledger, target, carry_in, dirty, 0);
}

/// The split adder: each half borrows the other as dirty workspace.
///
/// 1. vented addition into the low half, leaving the cross-half carry in `clean[2]`
/// 2. vented addition into the high half with its carries merged into the low half
/// 3. high-half phase fix, carry-xor targeting the low half
/// 4. vent the cross-half carry
/// 5. low-half phase fix, two carry-xors targeting the high half
pub(crate) fn emit_adder_3clean(e: &mut Emitter, target: &[Qubit], carry_in: Qubit, clean: [Qubit; 3]) {
    let n = target.len();
    let low_w = n.div_ceil(2);
    let high_w = n - low_w;
    let (low, high) = target.split_at(low_w);
    let holders = [clean[0], clean[1]];
    let cross = clean[2];

    let mut low_ledger = emit_streaming(
        e,
        &StreamPlan {
            target: low,
            carry_in,
            offset_base: 0,
            holders,
            carry_out: Some(cross),
            merged: None,
        },
    );

    let borrowed_low = &low[..high_w.saturating_sub(2)];
    let high_ledger = emit_streaming(
        e,
        &StreamPlan {
            target: high,
            carry_in: cross,
            offset_base: low_w as u32,
            holders,
            carry_out: None,
            merged: Some(borrowed_low),
        },
    );
    emit_merged_phase_fix(e, &high_ledger, high, cross, borrowed_low, low_w as u32);

    let r = e.vent(cross);
    low_ledger.entries.push((r, low_w as u32));

    // The high half is one short of the low half when n is odd; a vent holder
    // is clean again by now and fills the gap.
    let mut borrowed_high: Vec<Qubit> = high.to_vec();
    if low_w > high_w {
        borrowed_high.push(clean[0]);
    }
    emit_double_phase_fix(e, &low_ledger, low, carry_in, &borrowed_high, 0);
}
