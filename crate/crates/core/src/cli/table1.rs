//! Reference energy levels for three complex Hamiltonians and the
//! operator-ordering variants tried for each.

pub struct Variant {
    pub name: &'static str,
    pub hamiltonian: &'static str,
}

pub struct Table1Block {
    pub label: &'static str,
    pub variants: &'static [Variant],
    pub targets: [f64; 4],
    pub tolerance: f64,
    /// Whether every level must also pass the convergence test.
    pub require_converged: bool,
}

pub const TABLE1: [Table1Block; 3] = [
    Table1Block {
        label: "p^2+x^2+exp(-i*x)",
        variants: &[Variant {
            name: "as_written",
            hamiltonian: "p^2+x^2+exp(-i*x)",
        }],
        targets: [1.9962720, 3.3061605, 5.0145266, 6.8279080],
        tolerance: 1e-4,
        require_converged: true,
    },
    Table1Block {
        label: "p^2+exp(i*x*p)+exp(-i*p*x)+x^4",
        variants: &[
            Variant {
                name: "with_x2",
                hamiltonian: "p^2+x^2+exp(i*x*p)+exp(-i*p*x)+x^4",
            },
            Variant {
                name: "without_x2",
                hamiltonian: "p^2+exp(i*x*p)+exp(-i*p*x)+x^4",
            },
        ],
        targets: [1.998495, 4.360294, 7.524852, 11.347845],
        tolerance: 5e-3,
        require_converged: false,
    },
    Table1Block {
        label: "p^2+x^2+x^2*p^2+x^4+x+i*p",
        variants: &[
            Variant {
                name: "literal_order",
                hamiltonian: "p^2+x^2+x^2*p^2+x^4+x+i*p",
            },
            Variant {
                name: "symmetrized",
                hamiltonian: "p^2+x^2+0.5*x^2*p^2+0.5*p^2*x^2+x^4+x+i*p",
            },
        ],
        targets: [1.3419610, 5.8301576, 11.6443764, 18.7296043],
        tolerance: 5e-3,
        require_converged: false,
    },
];
