use std::fmt::Write;

use crate::circuit::GateCircuit;

/// OpenQASM 2.0 text with terminal measurements. Angles use the shortest
/// round-trip decimal form, so equal circuits give identical bytes.
pub fn emit_qasm(circuit: &GateCircuit) -> String {
    let n = circuit.n();
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{n}];");
    let _ = writeln!(out, "creg c[{n}];");
    for (g, _) in circuit.gates() {
        let _ = writeln!(out, "{g};");
    }
    for q in 0..n {
        let _ = writeln!(out, "measure q[{q}] -> c[{q}];");
    }
    out
}
