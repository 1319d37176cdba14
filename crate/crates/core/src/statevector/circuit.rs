use super::{GateOp, QuantumState};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub enum Instruction {
    Gate(GateOp),
    /// Marks where a qubit is measured; simulation leaves the state untouched.
    Measure { qubit: usize },
}

/// An ordered instruction list over a fixed number of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            instructions: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn push(&mut self, gate: GateOp) {
        debug_assert!(gate.max_qubit() < self.n_qubits);
        self.instructions.push(Instruction::Gate(gate));
    }

    pub fn extend<I: IntoIterator<Item = GateOp>>(&mut self, gates: I) {
        for gate in gates {
            self.push(gate);
        }
    }

    pub fn measure(&mut self, qubit: usize) {
        self.instructions.push(Instruction::Measure { qubit });
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn gates(&self) -> impl DoubleEndedIterator<Item = &GateOp> {
        self.instructions.iter().filter_map(|i| match i {
            Instruction::Gate(g) => Some(g),
            Instruction::Measure { .. } => None,
        })
    }

    pub fn gate_count(&self) -> usize {
        self.gates().count()
    }

    pub fn measured_qubits(&self) -> Vec<usize> {
        self.instructions
            .iter()
            .filter_map(|i| match i {
                Instruction::Measure { qubit } => Some(*qubit),
                Instruction::Gate(_) => None,
            })
            .collect()
    }

    /// Reversed, daggered gates. Measurement markers are dropped.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            instructions: self
                .gates()
                .rev()
                .map(|g| Instruction::Gate(g.dagger()))
                .collect(),
        }
    }

    /// Applies every gate in order, skipping measurement markers.
    pub fn apply_to(&self, state: &mut QuantumState) -> Result<()> {
        for gate in self.gates() {
            state.apply(gate)?;
        }
        Ok(())
    }
}
