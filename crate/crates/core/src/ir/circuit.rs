use std::collections::BTreeSet;
use std::fmt;

use super::expr::ClassicalExpr;
use crate::arith::MAX_WIDTH;

/// Index of a qubit in a circuit's register layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Qubit(pub u32);

impl Qubit {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

/// The part a register plays in an adder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Clean,
    Dirty,
    CarryIn,
    Target,
    Control,
}

impl Role {
    pub const ALL: [Role; 5] = [Role::Clean, Role::Dirty, Role::CarryIn, Role::Target, Role::Control];

    pub fn name(self) -> &'static str {
        match self {
            Role::Clean => "clean",
            Role::Dirty => "dirty",
            Role::CarryIn => "carry_in",
            Role::Target => "target",
            Role::Control => "control",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.name() == name)
    }

    fn label_prefix(self) -> &'static str {
        match self {
            Role::Clean => "_clean",
            Role::Dirty => "_dirty",
            Role::CarryIn => "carry_in",
            Role::Target => "target",
            Role::Control => "control",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Span {
    pub role: Role,
    pub start: u32,
    pub len: u32,
}

impl Span {
    pub fn qubit(&self, i: u32) -> Qubit {
        debug_assert!(i < self.len);
        Qubit(self.start + i)
    }

    pub fn qubits(&self) -> Vec<Qubit> {
        (self.start..self.start + self.len).map(Qubit).collect()
    }

    pub fn contains(&self, q: Qubit) -> bool {
        (self.start..self.start + self.len).contains(&q.0)
    }
}

/// Named, contiguous register spans in qubit order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RegisterLayout {
    spans: Vec<Span>,
}

impl RegisterLayout {
    /// Lay out spans back to back in the given order. Zero-length spans are skipped.
    pub fn sequential(parts: &[(Role, u32)]) -> Self {
        let mut spans = Vec::new();
        let mut next = 0;
        for &(role, len) in parts {
            if len > 0 {
                spans.push(Span { role, start: next, len });
                next += len;
            }
        }
        Self { spans }
    }

    /// Build from explicit spans; consistency is checked by `Circuit::validate`.
    pub fn from_spans(spans: Vec<Span>) -> Self {
        Self { spans }
    }

    pub fn spans(&self) -> &[Span] {
        &self.spans
    }

    pub fn qubit_count(&self) -> usize {
        self.spans.iter().map(|s| (s.start + s.len) as usize).max().unwrap_or(0)
    }

    pub fn span(&self, role: Role) -> Option<&Span> {
        self.spans.iter().find(|s| s.role == role)
    }

    pub fn len_of(&self, role: Role) -> u32 {
        self.spans.iter().filter(|s| s.role == role).map(|s| s.len).sum()
    }

    pub fn qubits(&self, role: Role) -> Vec<Qubit> {
        self.span(role).map(Span::qubits).unwrap_or_default()
    }

    pub fn role_of(&self, q: Qubit) -> Option<Role> {
        self.spans.iter().find(|s| s.contains(q)).map(|s| s.role)
    }

    /// Figure-style wire label, e.g. `_clean0`, `carry_in`, `target5`.
    pub fn label(&self, q: Qubit) -> String {
        match self.spans.iter().find(|s| s.contains(q)) {
            Some(s) if matches!(s.role, Role::CarryIn | Role::Control) && s.len == 1 => {
                s.role.label_prefix().to_string()
            }
            Some(s) => format!("{}{}", s.role.label_prefix(), q.0 - s.start),
            None => q.to_string(),
        }
    }

    /// Read the little-endian value of a register out of a basis-state index.
    pub fn read(&self, role: Role, basis: u64) -> u64 {
        match self.span(role) {
            Some(s) => (basis >> s.start) & crate::arith::mask(s.len),
            None => 0,
        }
    }

    /// Overwrite a register's value inside a basis-state index.
    pub fn write(&self, role: Role, value: u64, basis: u64) -> u64 {
        match self.span(role) {
            Some(s) => {
                let m = crate::arith::mask(s.len) << s.start;
                (basis & !m) | ((value << s.start) & m)
            }
            None => basis,
        }
    }

    pub(crate) fn push(&mut self, role: Role, len: u32) -> Qubit {
        let start = self.qubit_count() as u32;
        self.spans.push(Span { role, start, len });
        Qubit(start)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    X,
    Z,
    /// X-basis measurement into a record, followed by reset to |0>.
    MeasureXReset,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::MeasureXReset => "MeasureXReset",
        }
    }
}

/// A single-qubit control. Fires when the qubit's value equals `polarity`.
///
/// Polarity `1` is an ordinary control; a polarity like `1^d3` is a control
/// whose required value is inverted when `d3` is set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: Qubit,
    pub polarity: ClassicalExpr,
}

impl Control {
    pub fn on(qubit: Qubit) -> Self {
        Self {
            qubit,
            polarity: ClassicalExpr::one(),
        }
    }

    pub fn with_polarity(qubit: Qubit, polarity: ClassicalExpr) -> Self {
        Self { qubit, polarity }
    }
}

/// A ZZ..Z product control. Fires when the xor of the qubits equals `polarity`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParityControl {
    pub qubits: Vec<Qubit>,
    pub polarity: ClassicalExpr,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instruction {
    pub kind: GateKind,
    pub target: Qubit,
    pub controls: Vec<Control>,
    pub parity: Vec<ParityControl>,
    pub condition: Option<ClassicalExpr>,
    pub record: Option<u32>,
}

impl Instruction {
    pub fn gate(kind: GateKind, target: Qubit) -> Self {
        Self {
            kind,
            target,
            controls: Vec::new(),
            parity: Vec::new(),
            condition: None,
            record: None,
        }
    }

    pub fn measure_x_reset(target: Qubit, record: u32) -> Self {
        Self {
            record: Some(record),
            ..Self::gate(GateKind::MeasureXReset, target)
        }
    }

    pub fn controlled(mut self, c: Control) -> Self {
        self.controls.push(c);
        self
    }

    pub fn parity_controlled(mut self, p: ParityControl) -> Self {
        self.parity.push(p);
        self
    }

    pub fn conditioned(mut self, cond: ClassicalExpr) -> Self {
        self.condition = Some(cond);
        self
    }

    /// Quantum controls plus parity groups, i.e. the control count after lowering.
    pub fn control_arity(&self) -> usize {
        self.controls.len() + self.parity.len()
    }

    /// Every qubit the instruction reads or writes.
    pub fn touched(&self) -> impl Iterator<Item = Qubit> + '_ {
        std::iter::once(self.target)
            .chain(self.controls.iter().map(|c| c.qubit))
            .chain(self.parity.iter().flat_map(|p| p.qubits.iter().copied()))
    }

    pub fn expressions(&self) -> impl Iterator<Item = &ClassicalExpr> + '_ {
        self.controls
            .iter()
            .map(|c| &c.polarity)
            .chain(self.parity.iter().map(|p| &p.polarity))
            .chain(self.condition.iter())
    }

    pub fn has_offset_terms(&self) -> bool {
        self.expressions().any(ClassicalExpr::has_offsets)
    }

    /// The parity-lowering pivot for group `g`: its first qubit not used
    /// anywhere else in this instruction.
    pub fn parity_pivot(&self, g: usize) -> Option<Qubit> {
        let group = &self.parity[g];
        group.qubits.iter().copied().find(|&q| {
            q != self.target
                && self.controls.iter().all(|c| c.qubit != q)
                && self
                    .parity
                    .iter()
                    .enumerate()
                    .all(|(i, p)| i == g || !p.qubits.contains(&q))
        })
    }
}

/// An adder circuit: a register layout plus an ordered instruction list.
///
/// Offset bits `d_k` stay symbolic until [`crate::builders::bind_offset`] or
/// [`crate::builders::apply_control`] resolves them. When `carry_in_const` is
/// set, `d_k` refers to bits of the effective offset `(d + carry_in_const) mod 2^n`
/// and the `carry_in` wire must start in |0>.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circuit {
    pub(crate) layout: RegisterLayout,
    pub(crate) instructions: Vec<Instruction>,
    pub(crate) offset_width: u32,
    pub(crate) offset: Option<u64>,
    pub(crate) carry_in_const: Option<bool>,
}

impl Circuit {
    pub fn new(layout: RegisterLayout, instructions: Vec<Instruction>, offset_width: u32) -> Self {
        Self {
            layout,
            instructions,
            offset_width,
            offset: None,
            carry_in_const: None,
        }
    }

    pub fn with_bound_offset(mut self, offset: Option<u64>) -> Self {
        self.offset = offset;
        self
    }

    pub fn with_carry_in_const(mut self, bit: Option<bool>) -> Self {
        self.carry_in_const = bit;
        self
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn offset_width(&self) -> u32 {
        self.offset_width
    }

    /// The offset this circuit was specialised to, if any.
    pub fn bound_offset(&self) -> Option<u64> {
        self.offset
    }

    pub fn carry_in_const(&self) -> Option<bool> {
        self.carry_in_const
    }

    pub fn qubit_count(&self) -> usize {
        self.layout.qubit_count()
    }

    pub fn record_count(&self) -> usize {
        self.instructions
            .iter()
            .filter(|i| i.kind == GateKind::MeasureXReset)
            .count()
    }

    pub fn is_symbolic(&self) -> bool {
        self.instructions.iter().any(Instruction::has_offset_terms)
    }

    /// Remove the instruction at `index`, leaving record numbering untouched.
    pub fn without_instruction(&self, index: usize) -> Self {
        let mut c = self.clone();
        c.instructions.remove(index);
        c
    }

    /// Check every structural invariant; an empty list means the circuit is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        self.validate_layout(&mut out);
        let qubits = self.qubit_count() as u32;
        let mut produced: BTreeSet<u32> = BTreeSet::new();

        for (idx, ins) in self.instructions.iter().enumerate() {
            let mut v = |kind| {
                out.push(Violation {
                    instruction: Some(idx),
                    kind,
                })
            };

            for q in ins.touched() {
                if q.0 >= qubits {
                    v(ViolationKind::QubitOutOfRange(q));
                }
            }
            for e in ins.expressions() {
                for &r in e.records() {
                    if !produced.contains(&r) {
                        v(ViolationKind::RecordBeforeMeasurement(r));
                    }
                }
                for &k in e.offsets() {
                    if k >= self.offset_width {
                        v(ViolationKind::OffsetBitOutOfRange(k));
                    }
                }
            }

            if ins.kind == GateKind::MeasureXReset {
                if ins.control_arity() > 0 || ins.condition.is_some() {
                    v(ViolationKind::ControlledMeasurement);
                }
                match ins.record {
                    None => v(ViolationKind::MissingRecord),
                    Some(r) => {
                        if r as usize != produced.len() || !produced.insert(r) {
                            v(ViolationKind::NonDenseRecord(r));
                        }
                    }
                }
                continue;
            }

            if ins.record.is_some() {
                v(ViolationKind::UnexpectedRecord);
            }
            if ins.controls.len() > 2 {
                v(ViolationKind::TooManyControls(ins.controls.len()));
            }
            if ins.parity.len() > 2 {
                v(ViolationKind::TooManyParityGroups(ins.parity.len()));
            }
            if ins.control_arity() > 2 {
                v(ViolationKind::TooManyControls(ins.control_arity()));
            }
            let mut seen = BTreeSet::new();
            for c in &ins.controls {
                if c.qubit == ins.target || !seen.insert(c.qubit) {
                    v(ViolationKind::OverlappingOperands(c.qubit));
                }
            }
            for (g, p) in ins.parity.iter().enumerate() {
                if p.qubits.is_empty() {
                    v(ViolationKind::EmptyParityGroup);
                    continue;
                }
                let distinct: BTreeSet<_> = p.qubits.iter().collect();
                if distinct.len() != p.qubits.len() {
                    v(ViolationKind::OverlappingOperands(p.qubits[0]));
                }
                if p.qubits.contains(&ins.target) {
                    v(ViolationKind::OverlappingOperands(ins.target));
                }
                if ins.parity_pivot(g).is_none() {
                    v(ViolationKind::NoParityPivot);
                }
            }
        }
        out
    }

    fn validate_layout(&self, out: &mut Vec<Violation>) {
        let mut v = |kind| {
            out.push(Violation {
                instruction: None,
                kind,
            })
        };
        let mut next = 0;
        for s in self.layout.spans() {
            if s.len == 0 {
                v(ViolationKind::EmptySpan(s.role));
            }
            if s.start != next {
                v(ViolationKind::LayoutGap(s.start));
            }
            next = s.start + s.len;
        }
        for role in Role::ALL {
            if self.layout.spans().iter().filter(|s| s.role == role).count() > 1 {
                v(ViolationKind::DuplicateSpan(role));
            }
        }
        match self.layout.span(Role::Target) {
            None => v(ViolationKind::MissingTarget),
            Some(t) if t.len != self.offset_width => v(ViolationKind::TargetWidth {
                target: t.len,
                n: self.offset_width,
            }),
            Some(_) => {}
        }
        if self.offset_width == 0 || self.offset_width > MAX_WIDTH {
            v(ViolationKind::TargetWidth {
                target: self.offset_width,
                n: self.offset_width,
            });
        }
        if let Some(d) = self.offset {
            if d > crate::arith::mask(self.offset_width) {
                v(ViolationKind::OffsetTooWide(d));
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Violation {
    pub instruction: Option<usize>,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    QubitOutOfRange(Qubit),
    RecordBeforeMeasurement(u32),
    OffsetBitOutOfRange(u32),
    ControlledMeasurement,
    MissingRecord,
    UnexpectedRecord,
    NonDenseRecord(u32),
    TooManyControls(usize),
    TooManyParityGroups(usize),
    OverlappingOperands(Qubit),
    EmptyParityGroup,
    NoParityPivot,
    EmptySpan(Role),
    LayoutGap(u32),
    DuplicateSpan(Role),
    MissingTarget,
    TargetWidth { target: u32, n: u32 },
    OffsetTooWide(u64),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(i) = self.instruction {
            write!(f, "instruction {i}: ")?;
        }
        match &self.kind {
            ViolationKind::QubitOutOfRange(q) => write!(f, "{q} is outside the layout"),
            ViolationKind::RecordBeforeMeasurement(r) => write!(f, "r{r} referenced before it is measured"),
            ViolationKind::OffsetBitOutOfRange(k) => write!(f, "d{k} is beyond the offset width"),
            ViolationKind::ControlledMeasurement => f.write_str("measurement carries controls or a condition"),
            ViolationKind::MissingRecord => f.write_str("measurement has no record index"),
            ViolationKind::UnexpectedRecord => f.write_str("non-measurement carries a record index"),
            ViolationKind::NonDenseRecord(r) => write!(f, "record r{r} is out of order or duplicated"),
            ViolationKind::TooManyControls(n) => write!(f, "{n} controls exceed the Toffoli limit of 2"),
            ViolationKind::TooManyParityGroups(n) => write!(f, "{n} parity groups exceed the limit of 2"),
            ViolationKind::OverlappingOperands(q) => write!(f, "{q} is used as more than one operand"),
            ViolationKind::EmptyParityGroup => f.write_str("empty parity group"),
            ViolationKind::NoParityPivot => f.write_str("parity group has no qubit free for lowering"),
            ViolationKind::EmptySpan(r) => write!(f, "span {} is empty", r.name()),
            ViolationKind::LayoutGap(s) => write!(f, "span starting at {s} is not contiguous"),
            ViolationKind::DuplicateSpan(r) => write!(f, "span {} appears twice", r.name()),
            ViolationKind::MissingTarget => f.write_str("layout has no target span"),
            ViolationKind::TargetWidth { target, n } => write!(f, "target span has {target} qubits, n = {n}"),
            ViolationKind::OffsetTooWide(d) => write!(f, "bound offset {d} exceeds the register width"),
        }
    }
}
