//! Built-in dessins used by `--selftest` and the acceptance suite.

/// A named dessin with tags used for filtering.
#[derive(Clone, Copy, Debug)]
pub struct Entry {
    pub name: &'static str,
    pub group: &'static str,
    pub tags: &'static [&'static str],
    pub text: &'static str,
}

impl Entry {
    /// Whether `filter` selects this entry: an empty filter selects
    /// everything, otherwise the name, group or a tag must match exactly.
    pub fn matches(&self, filter: &str) -> bool {
        filter.is_empty()
            || self.name == filter
            || self.group == filter
            || self.tags.contains(&filter)
    }

    /// `a = b = (1 2 … m)`, where `x = m·(a, a)` has a closed-form spectrum.
    pub fn is_cyclic_diagonal(&self) -> bool {
        self.tags.contains(&"abelian")
    }

    /// Known to have eigenvalues outside `Q(ζ_N)`, so the full pipeline is
    /// expected to stop with that diagnosis.
    pub fn expects_outside_cyclotomic(&self) -> bool {
        self.tags.contains(&"outside-cyclotomic")
    }
}

pub const CORPUS: &[Entry] = &[
    Entry {
        name: "trivial",
        group: "1",
        tags: &["abelian", "small"],
        text: "n=1 a=() b=()",
    },
    Entry {
        name: "z2-diagonal",
        group: "Z2",
        tags: &["abelian", "small"],
        text: "n=2 a=(1 2) b=(1 2)",
    },
    Entry {
        name: "z2-edge",
        group: "Z2",
        tags: &["small"],
        text: "n=2 a=(1 2) b=()",
    },
    Entry {
        name: "z3-diagonal",
        group: "Z3",
        tags: &["abelian", "small"],
        text: "n=3 a=(1 2 3) b=(1 2 3)",
    },
    Entry {
        name: "z3-inverse",
        group: "Z3",
        tags: &["small"],
        text: "n=3 a=(1 2 3) b=(1 3 2)",
    },
    Entry {
        name: "z4-diagonal",
        group: "Z4",
        tags: &["abelian", "small"],
        text: "n=4 a=(1 2 3 4) b=(1 2 3 4)",
    },
    Entry {
        name: "z5-diagonal",
        group: "Z5",
        tags: &["abelian", "small"],
        text: "n=5 a=(1 2 3 4 5) b=(1 2 3 4 5)",
    },
    Entry {
        name: "z6-mixed",
        group: "Z6",
        tags: &["small"],
        text: "n=6 a=(1 2 3 4 5 6) b=(1 3 5)(2 4 6)",
    },
    Entry {
        name: "klein",
        group: "Z2xZ2",
        tags: &["small"],
        text: "n=4 a=(1 2)(3 4) b=(1 3)(2 4)",
    },
    Entry {
        name: "s3",
        group: "S3",
        tags: &["small"],
        text: "n=3 a=(1 2 3) b=(1 2)",
    },
    Entry {
        name: "d4",
        group: "D4",
        tags: &["small"],
        text: "n=4 a=(1 2 3 4) b=(1 3)",
    },
    Entry {
        name: "q8",
        group: "Q8",
        tags: &["small"],
        text: "n=8 a=(1 3 2 4)(5 7 6 8) b=(1 5 2 6)(3 8 4 7)",
    },
    Entry {
        name: "a4",
        group: "A4",
        tags: &["small"],
        text: "n=4 a=(1 2 3) b=(2 3 4)",
    },
    Entry {
        name: "s4",
        group: "S4",
        tags: &["small"],
        text: "n=4 a=(1 2 3 4) b=(1 2)",
    },
    Entry {
        name: "a5",
        group: "A5",
        tags: &["large", "outside-cyclotomic"],
        text: "n=5 a=(1 2 3 4 5) b=(1 2 3)",
    },
    Entry {
        name: "s5",
        group: "S5",
        tags: &["large", "outside-cyclotomic"],
        text: "n=5 a=(1 2 3 4 5) b=(1 2)",
    },
];

/// Entries selected by `filter`, in corpus order.
pub fn select(filter: &str) -> Vec<&'static Entry> {
    CORPUS.iter().filter(|e| e.matches(filter)).collect()
}

/// `n=m a=(1 … m) b=(1 … m)`.
pub fn cyclic_diagonal(m: usize) -> String {
    if m == 1 {
        return "n=1 a=() b=()".to_string();
    }
    let cycle: Vec<String> = (1..=m).map(|i| i.to_string()).collect();
    let c = format!("({})", cycle.join(" "));
    format!("n={m} a={c} b={c}")
}
