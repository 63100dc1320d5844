//! Test-side oracle, written against the bit-level recurrence only.
#![allow(dead_code)]

use ventadd::ir::{Circuit, Role};
use ventadd::sim::{run, BranchPolicy, SimConfig};
use ventadd::{BuilderId, VentLedger};

pub fn low_mask(n: u32) -> u64 {
    (1u64 << n) - 1
}

/// Ripple-carry addition bit by bit: `(sum mod 2^n, carries c_0..c_{n-1}, c_n)`.
pub fn ripple(x: u64, d: u64, c0: bool, n: u32) -> (u64, u64, bool) {
    let mut c = c0 as u64;
    let (mut sum, mut carries) = (0, 0);
    for k in 0..n {
        let (a, b) = ((x >> k) & 1, (d >> k) & 1);
        carries |= c << k;
        sum |= (a ^ b ^ c) << k;
        c = (a & b) | (a & c) | (b & c);
    }
    (sum, carries, c == 1)
}

/// What the ideal operation does to one basis input.
pub struct Oracle<'a> {
    pub builder: BuilderId,
    pub circuit: &'a Circuit,
    pub d: u64,
}

impl Oracle<'_> {
    fn n(&self) -> u32 {
        self.circuit.offset_width()
    }

    fn get(&self, role: Role, basis: u64) -> u64 {
        self.circuit.layout().read(role, basis)
    }

    fn put(&self, role: Role, v: u64, basis: u64) -> u64 {
        self.circuit.layout().write(role, v, basis)
    }

    /// `(e, c0)` with the carry-in constant folded into `e` when classical.
    fn addend(&self, basis: u64) -> (u64, bool) {
        let layout = self.circuit.layout();
        let on = layout.span(Role::Control).is_none() || self.get(Role::Control, basis) == 1;
        let (e, c) = match self.circuit.carry_in_const() {
            Some(b) => ((self.d + b as u64) & low_mask(self.n()), false),
            None => (self.d, self.get(Role::CarryIn, basis) == 1),
        };
        (if on { e } else { 0 }, c)
    }

    pub fn carries(&self, basis: u64) -> u64 {
        let (e, c) = self.addend(basis);
        ripple(self.get(Role::Target, basis), e, c, self.n()).1
    }

    pub fn image(&self, basis: u64) -> u64 {
        let n = self.n();
        let x = self.get(Role::Target, basis);
        let (e, c) = self.addend(basis);
        let (sum, carries, cout) = ripple(x, e, c, n);
        // c_1..c_{n-1} then c_n
        let upper = (carries >> 1) | ((cout as u64) << (n - 1));
        let g = self.get(Role::Dirty, basis);
        match self.builder {
            BuilderId::CarryXor => self.put(Role::Dirty, g ^ (upper & low_mask(n - 1)), basis),
            BuilderId::Stream if self.circuit.layout().len_of(Role::Dirty) > 0 => {
                let b = self.put(Role::Target, sum, basis);
                self.put(Role::Dirty, g ^ (upper & low_mask(n - 2)), b)
            }
            _ => self.put(Role::Target, sum, basis),
        }
    }

    /// Phase left pending by the vents of a bare streaming adder.
    pub fn ledger_sign(&self, ledger: Option<&VentLedger>, basis: u64, records: &[bool]) -> f64 {
        let Some(ledger) = ledger else { return 1.0 };
        let c = self.carries(basis);
        let odd = ledger
            .entries
            .iter()
            .filter(|(r, k)| records[*r as usize] && (c >> k) & 1 == 1)
            .count()
            % 2;
        if odd == 1 {
            -1.0
        } else {
            1.0
        }
    }

    /// Basis inputs ranging over target, dirty, control and a quantum carry-in.
    pub fn superposition_support(&self) -> Vec<u64> {
        let layout = self.circuit.layout();
        let mut qubits = Vec::new();
        for role in [Role::Target, Role::Dirty, Role::Control, Role::CarryIn] {
            if role == Role::CarryIn && self.circuit.carry_in_const().is_some() {
                continue;
            }
            qubits.extend(layout.qubits(role));
        }
        (0..1u64 << qubits.len())
            .map(|v| {
                qubits
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (i, q)| acc | (((v >> i) & 1) << q.0))
            })
            .collect()
    }

    /// Per enumerated branch of a superposition input: `(records, weight, |<ref|out>|)`.
    pub fn phase_overlaps(&self, ledger: Option<&VentLedger>) -> Vec<(Vec<bool>, f64, f64)> {
        let support = self.superposition_support();
        let dim = 1usize << self.circuit.qubit_count();
        let amp = 1.0 / (support.len() as f64).sqrt();
        let mut input = vec![0.0; dim];
        for &b in &support {
            input[b as usize] = amp;
        }
        let cfg = SimConfig {
            max_qubits: 24,
            enumeration_cap: 16,
        };
        let branches = run(self.circuit, &input, Some(self.d), &BranchPolicy::EnumerateAll, &cfg).expect("simulation");
        branches
            .into_iter()
            .map(|br| {
                let mut reference = vec![0.0; dim];
                for &b in &support {
                    reference[self.image(b) as usize] += amp * self.ledger_sign(ledger, b, &br.records);
                }
                let ov: f64 = reference.iter().zip(&br.amplitudes).map(|(a, b)| a * b).sum();
                (br.records, br.weight, ov.abs())
            })
            .collect()
    }
}
