use crate::formula::{Clause, Lit, Var};
use crate::mbd::{Observation, SystemBuilder, SystemDescription};

/// The C17 circuit as a netlist, in the same signal order as [`gen_c17`].
pub const C17_NETLIST: &str = "\
# ISCAS85 C17
INPUT(i1)
INPUT(i2)
INPUT(i3)
INPUT(i4)
INPUT(i5)
OUTPUT(o1)
OUTPUT(o2)
z1 = NAND(i1, i3)
z2 = NAND(i3, i4)
z3 = NAND(i2, z2)
z4 = NAND(z2, i5)
o1 = NAND(z1, z3)
o2 = NAND(z3, z4)
";

/// Observation id and values of `⟨i1, i2, i3, i4, i5, o1, o2⟩`.
pub const C17_OBSERVATIONS: [(u32, [bool; 7]); 5] = [
    (15, [true, false, false, false, false, true, false]),
    (27, [false, true, false, true, false, false, true]),
    (34, [false, false, false, true, false, false, true]),
    (46, [false, false, true, true, false, true, true]),
    (52, [true, true, true, false, false, false, false]),
];

/// Variables: `i1..i5` are 1-5, `z1..z4` are 6-9, `o1` is 10, `o2` is 11.
/// Components in order `z1, z2, z3, z4, o1, o2`, one NAND each.
pub fn gen_c17() -> (SystemDescription, Vec<Observation>) {
    let v = |i: u32| Var::from_index(i);
    let gates: [(&str, u32, u32, u32); 6] = [
        ("z1", 6, 1, 3),
        ("z2", 7, 3, 4),
        ("z3", 8, 2, 7),
        ("z4", 9, 7, 5),
        ("o1", 10, 6, 8),
        ("o2", 11, 8, 9),
    ];
    let mut b = SystemBuilder::new(11);
    for (name, out, a, bb) in gates {
        let c = b.add_component(name);
        let (o, a, bb) = (v(out), v(a), v(bb));
        b.add_component_clause(c, Clause::new(vec![o.pos(), a.pos()]));
        b.add_component_clause(c, Clause::new(vec![o.pos(), bb.pos()]));
        b.add_component_clause(c, Clause::new(vec![o.neg(), a.neg(), bb.neg()]));
    }
    let observed = [1, 2, 3, 4, 5, 10, 11];
    let observations = C17_OBSERVATIONS
        .iter()
        .map(|&(id, values)| {
            let units = observed.iter().zip(values).map(|(&var, val)| Lit::new(v(var), val)).collect();
            Observation::new(id, units).expect("distinct variables")
        })
        .collect();
    (b.build(), observations)
}
