use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{Clause, Lit, Var};
use crate::mbd::{SystemBuilder, SystemDescription};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    And,
    Nand,
    Or,
    Nor,
    Not,
    Buff,
    Xor,
    Xnor,
}

impl FromStr for GateKind {
    type Err = NetlistError;

    fn from_str(s: &str) -> Result<GateKind, NetlistError> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "AND" => GateKind::And,
            "NAND" => GateKind::Nand,
            "OR" => GateKind::Or,
            "NOR" => GateKind::Nor,
            "NOT" => GateKind::Not,
            "BUFF" | "BUF" => GateKind::Buff,
            "XOR" => GateKind::Xor,
            "XNOR" => GateKind::Xnor,
            _ => return Err(NetlistError::UnknownGate(s.to_string())),
        })
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GateKind::And => "AND",
            GateKind::Nand => "NAND",
            GateKind::Or => "OR",
            GateKind::Nor => "NOR",
            GateKind::Not => "NOT",
            GateKind::Buff => "BUFF",
            GateKind::Xor => "XOR",
            GateKind::Xnor => "XNOR",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub output: String,
    pub kind: GateKind,
    pub inputs: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Netlist {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub gates: Vec<Gate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetlistError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown gate kind {0}")]
    UnknownGate(String),
    #[error("gate {output}: {kind} cannot take {arity} inputs")]
    Arity { output: String, kind: GateKind, arity: usize },
    #[error("signal {0} is defined more than once")]
    Redefined(String),
    #[error("signal {0} is used but never defined")]
    Undefined(String),
    #[error("combinational cycle through {}", .0.join(" -> "))]
    Cycle(Vec<String>),
}

fn syntax(line: usize, msg: impl Into<String>) -> NetlistError {
    NetlistError::Syntax { line, msg: msg.into() }
}

fn parenthesized(s: &str, line: usize) -> Result<(&str, &str), NetlistError> {
    let open = s.find('(').ok_or_else(|| syntax(line, "expected '('"))?;
    let inner = s[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| syntax(line, "expected ')' at end of line"))?;
    Ok((s[..open].trim(), inner))
}

impl Netlist {
    /// Parses `INPUT(a)`, `OUTPUT(b)` and `b = KIND(a, ...)` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Netlist, NetlistError> {
        let mut net = Netlist::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let s = raw.split('#').next().unwrap_or("").trim();
            if s.is_empty() {
                continue;
            }
            if let Some((output, rhs)) = s.split_once('=') {
                let (kind, args) = parenthesized(rhs.trim(), line)?;
                let inputs: Vec<String> = args.split(',').map(|a| a.trim().to_string()).collect();
                if inputs.iter().any(String::is_empty) {
                    return Err(syntax(line, "empty gate input"));
                }
                net.gates.push(Gate {
                    output: output.trim().to_string(),
                    kind: kind.parse()?,
                    inputs,
                });
            } else {
                let (head, name) = parenthesized(s, line)?;
                let name = name.trim().to_string();
                match head.to_ascii_uppercase().as_str() {
                    "INPUT" => net.inputs.push(name),
                    "OUTPUT" => net.outputs.push(name),
                    _ => return Err(syntax(line, format!("unknown declaration {head}"))),
                }
            }
        }
        Ok(net)
    }

    /// Signal numbering: inputs in declaration order, then gate outputs in gate order.
    fn signal_vars(&self) -> Result<HashMap<&str, Var>, NetlistError> {
        let mut vars = HashMap::new();
        let names = self.inputs.iter().chain(self.gates.iter().map(|g| &g.output));
        for (i, name) in names.enumerate() {
            if vars.insert(name.as_str(), Var::from_index(i as u32 + 1)).is_some() {
                return Err(NetlistError::Redefined(name.clone()));
            }
        }
        for name in self.gates.iter().flat_map(|g| g.inputs.iter()).chain(self.outputs.iter()) {
            if !vars.contains_key(name.as_str()) {
                return Err(NetlistError::Undefined(name.clone()));
            }
        }
        Ok(vars)
    }

    fn check_arity(&self) -> Result<(), NetlistError> {
        for g in &self.gates {
            let n = g.inputs.len();
            let ok = match g.kind {
                GateKind::Not | GateKind::Buff => n == 1,
                _ => n >= 1,
            };
            if !ok {
                return Err(NetlistError::Arity {
                    output: g.output.clone(),
                    kind: g.kind,
                    arity: n,
                });
            }
        }
        Ok(())
    }

    /// Gate indices in an order where every gate follows the gates driving it.
    pub fn topological_order(&self) -> Result<Vec<usize>, NetlistError> {
        let driver: HashMap<&str, usize> = self.gates.iter().enumerate().map(|(i, g)| (g.output.as_str(), i)).collect();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.gates.len()];
        let mut order = Vec::with_capacity(self.gates.len());
        for root in 0..self.gates.len() {
            if state[root] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            state[root] = 1;
            while let Some(&mut (g, ref mut next)) = stack.last_mut() {
                if let Some(input) = self.gates[g].inputs.get(*next) {
                    *next += 1;
                    if let Some(&d) = driver.get(input.as_str()) {
                        match state[d] {
                            0 => {
                                state[d] = 1;
                                stack.push((d, 0));
                            }
                            1 => {
                                let start = stack.iter().position(|&(s, _)| s == d).unwrap_or(0);
                                let mut cycle: Vec<String> =
                                    stack[start..].iter().map(|&(s, _)| self.gates[s].output.clone()).collect();
                                cycle.push(self.gates[d].output.clone());
                                return Err(NetlistError::Cycle(cycle));
                            }
                            _ => {}
                        }
                    }
                } else {
                    state[g] = 2;
                    order.push(g);
                    stack.pop();
                }
            }
        }
        Ok(order)
    }

    /// Simulates the circuit on the given input values.
    pub fn simulate(&self, inputs: &[bool]) -> Result<HashMap<String, bool>, NetlistError> {
        let order = self.topological_order()?;
        let mut values: HashMap<String, bool> = self.inputs.iter().cloned().zip(inputs.iter().copied()).collect();
        for g in order {
            let gate = &self.gates[g];
            let args: Vec<bool> = gate
                .inputs
                .iter()
                .map(|i| values.get(i).copied().ok_or_else(|| NetlistError::Undefined(i.clone())))
                .collect::<Result<_, _>>()?;
            values.insert(gate.output.clone(), gate_value(gate.kind, &args));
        }
        Ok(values)
    }
}

pub fn gate_value(kind: GateKind, args: &[bool]) -> bool {
    let all = args.iter().all(|&a| a);
    let any = args.iter().any(|&a| a);
    let parity = args.iter().filter(|&&a| a).count() % 2 == 1;
    match kind {
        GateKind::And => all,
        GateKind::Nand => !all,
        GateKind::Or => any,
        GateKind::Nor => !any,
        GateKind::Not => !args[0],
        GateKind::Buff => args[0],
        GateKind::Xor => parity,
        GateKind::Xnor => !parity,
    }
}

/// CNF of `out ↔ kind(inputs)`.
pub fn gate_clauses(kind: GateKind, out: Lit, inputs: &[Lit]) -> Vec<Clause> {
    let mut clauses = Vec::new();
    match kind {
        GateKind::And | GateKind::Nand => {
            let o = if kind == GateKind::And { out } else { !out };
            for &a in inputs {
                clauses.push(Clause::new(vec![!o, a]));
            }
            clauses.push(std::iter::once(o).chain(inputs.iter().map(|&a| !a)).collect());
        }
        GateKind::Or | GateKind::Nor => {
            let o = if kind == GateKind::Or { out } else { !out };
            for &a in inputs {
                clauses.push(Clause::new(vec![o, !a]));
            }
            clauses.push(std::iter::once(!o).chain(inputs.iter().copied()).collect());
        }
        GateKind::Buff | GateKind::Not => {
            let a = if kind == GateKind::Buff { inputs[0] } else { !inputs[0] };
            clauses.push(Clause::new(vec![!out, a]));
            clauses.push(Clause::new(vec![out, !a]));
        }
        GateKind::Xor | GateKind::Xnor => {
            // One clause per input pattern, forcing the output to the pattern's parity.
            let n = inputs.len();
            for mask in 0u64..1 << n {
                let args: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                let value = gate_value(kind, &args);
                let mut lits: Vec<Lit> = inputs.iter().zip(&args).map(|(&a, &v)| if v { !a } else { a }).collect();
                lits.push(if value { out } else { !out });
                clauses.push(Clause::new(lits));
            }
        }
    }
    clauses
}

/// One component per gate, named after its output signal.
pub fn encode_netlist(net: &Netlist) -> Result<SystemDescription, NetlistError> {
    net.check_arity()?;
    let vars = net.signal_vars()?;
    net.topological_order()?;
    let mut b = SystemBuilder::new(vars.len() as u32);
    for g in &net.gates {
        let c = b.add_component(g.output.clone());
        let out = vars[g.output.as_str()].pos();
        let inputs: Vec<Lit> = g.inputs.iter().map(|i| vars[i.as_str()].pos()).collect();
        for clause in gate_clauses(g.kind, out, &inputs) {
            b.add_component_clause(c, clause);
        }
    }
    Ok(b.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Assignment;

    #[test]
    fn buff_and_nand_clause_counts() {
        let buff = encode_netlist(&Netlist::parse("INPUT(i)\nOUTPUT(o)\no = BUFF(i)\n").unwrap()).unwrap();
        assert_eq!(buff.num_clauses(), 2);
        assert!(buff.clauses().iter().all(|c| c.lits().contains(&buff.ab_lit(crate::mbd::ComponentId::new(1)))));
        let nand = encode_netlist(&Netlist::parse("INPUT(a)\nINPUT(b)\no = NAND(a, b)\n").unwrap()).unwrap();
        assert_eq!(nand.num_clauses(), 3);
    }

    #[test]
    fn gate_cnf_matches_truth_table() {
        let kinds = [
            (GateKind::And, 3),
            (GateKind::Nand, 2),
            (GateKind::Or, 3),
            (GateKind::Nor, 2),
            (GateKind::Not, 1),
            (GateKind::Buff, 1),
            (GateKind::Xor, 3),
            (GateKind::Xnor, 2),
        ];
        for (kind, n) in kinds {
            let inputs: Vec<Lit> = (1..=n).map(|v| Var::from_index(v).pos()).collect();
            let out = Var::from_index(n + 1).pos();
            let clauses = gate_clauses(kind, out, &inputs);
            for mask in 0u32..1 << (n + 1) {
                let values: Vec<bool> = (0..=n).map(|i| mask >> i & 1 == 1).collect();
                let a = Assignment::from_values(&values);
                let cnf = clauses.iter().all(|c| c.is_satisfied_by(&a).unwrap());
                let expected = gate_value(kind, &values[..n as usize]) == values[n as usize];
                assert_eq!(cnf, expected, "{kind} pattern {mask:b}");
            }
        }
    }

    #[test]
    fn cycle_rejected() {
        let net = Netlist::parse("INPUT(a)\nx = AND(a, y)\ny = NOT(x)\n").unwrap();
        match encode_netlist(&net) {
            Err(NetlistError::Cycle(c)) => {
                assert!(c.contains(&"x".to_string()) && c.contains(&"y".to_string()));
                assert_eq!(c.first(), c.last());
            }
            other => panic!("expected cycle, got {other:?}"),
        }
    }

    #[test]
    fn structural_errors() {
        let undefined = Netlist::parse("INPUT(a)\no = AND(a, b)\n").unwrap();
        assert_eq!(encode_netlist(&undefined), Err(NetlistError::Undefined("b".into())));
        let twice = Netlist::parse("INPUT(a)\na = NOT(a)\n").unwrap();
        assert_eq!(encode_netlist(&twice), Err(NetlistError::Redefined("a".into())));
        let arity = Netlist::parse("INPUT(a)\nINPUT(b)\no = NOT(a, b)\n").unwrap();
        assert!(matches!(encode_netlist(&arity), Err(NetlistError::Arity { .. })));
        assert!(matches!(Netlist::parse("o = FOO(a)"), Err(NetlistError::UnknownGate(_))));
        assert!(matches!(Netlist::parse("INPUT(a"), Err(NetlistError::Syntax { line: 1, .. })));
    }

    #[test]
    fn simulation() {
        let net = Netlist::parse("# half adder\nINPUT(a)\nINPUT(b)\ns = XOR(a, b)\nc = AND(a, b)\n").unwrap();
        let v = net.simulate(&[true, true]).unwrap();
        assert!(!v["s"] && v["c"]);
    }
}
