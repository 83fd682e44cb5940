//! Random generation of valid subset programs, used by the property and
//! acceptance suites to stress the analysis against the path-enumeration
//! oracle. Programs stay within the oracle's 30-block limit.

use rand::Rng;

const RELOPS: &[&str] = &[".EQ.", ".NE.", ".LT.", ".LE.", ".GT.", ".GE."];

struct Gen<'a, R: Rng> {
    rng: &'a mut R,
    vars: Vec<String>,
    lines: Vec<String>,
    /// Upper estimate of blocks produced so far.
    blocks: usize,
}

impl<'a, R: Rng> Gen<'a, R> {
    fn var(&mut self) -> String {
        let i = self.rng.gen_range(0..self.vars.len());
        self.vars[i].clone()
    }

    fn assignment(&mut self) {
        let target = self.var();
        let rhs = match self.rng.gen_range(0..5) {
            0 => format!("{}", self.rng.gen_range(0..100)),
            1 => self.var(),
            2 => format!("{}+{}", self.var(), self.rng.gen_range(1..10)),
            3 => format!("{}*{}", self.var(), self.var()),
            _ => format!("{}-{}", self.var(), self.var()),
        };
        self.lines.push(format!("      {target}={rhs}"));
    }

    fn send(&mut self) {
        let buf = self.var();
        let count = self.rng.gen_range(1..=2);
        let dest = self.rng.gen_range(0..=3);
        let tag = self.rng.gen_range(0..=2);
        self.lines.push(format!(
            "      call MPI_Send({buf},{count},MPI_INTEGER,{dest},{tag},MPI_COMM_WORLD,ierr)"
        ));
        self.blocks += 2;
    }

    fn recv(&mut self) {
        let buf = self.var();
        let count = self.rng.gen_range(1..=2);
        let source = if self.rng.gen_bool(0.5) {
            "MPI_ANY_SOURCE".to_string()
        } else {
            self.rng.gen_range(0..=2).to_string()
        };
        let tag = if self.rng.gen_bool(0.5) {
            "MPI_ANY_TAG".to_string()
        } else {
            self.rng.gen_range(0..=2).to_string()
        };
        self.lines.push(format!(
            "      call MPI_Recv({buf},{count},MPI_INTEGER,{source},{tag},MPI_COMM_WORLD,status,ierr)"
        ));
        self.blocks += 2;
    }

    fn ordinary_if(&mut self) {
        let v = self.var();
        let op = RELOPS[self.rng.gen_range(0..RELOPS.len())];
        let lit = self.rng.gen_range(0..10);
        self.lines.push(format!("      IF({v}{op}{lit}) THEN"));
        for _ in 0..self.rng.gen_range(1..=2) {
            self.assignment();
        }
        if self.rng.gen_bool(0.5) {
            self.lines.push("      ELSE".to_string());
            for _ in 0..self.rng.gen_range(1..=2) {
                self.assignment();
            }
        }
        self.lines.push("      ENDIF".to_string());
        self.blocks += 4;
    }

    fn section_item(&mut self) {
        match self.rng.gen_range(0..5) {
            0 => self.send(),
            1 => self.recv(),
            2 if self.blocks + 4 <= 28 => self.ordinary_if(),
            _ => self.assignment(),
        }
    }

    fn rank_section(&mut self) {
        let rank = self.rng.gen_range(0..=2);
        self.lines.push(format!("      IF(MYID.EQ.{rank}) THEN"));
        self.blocks += 2; // fork block + join block
        let items = self.rng.gen_range(1..=3);
        for _ in 0..items {
            if self.blocks + 4 > 28 {
                self.assignment();
            } else {
                self.section_item();
            }
        }
        self.lines.push("      ENDIF".to_string());
    }
}

/// Generates one random, always-valid subset program: up to ten variables,
/// up to three rank sections, at most 30 basic blocks.
pub fn random_program<R: Rng>(rng: &mut R) -> String {
    let nvars = rng.gen_range(1..=7);
    let vars: Vec<String> = (0..nvars).map(|i| format!("V{i}")).collect();
    let uses_mpi = rng.gen_bool(0.85);

    let mut g = Gen {
        rng,
        vars,
        lines: Vec::new(),
        blocks: 1,
    };

    let mut decl = g.vars.join(",");
    if uses_mpi {
        g.lines.push("      include 'mpif.h'".to_string());
        decl = format!("ierr,myid,count,{decl}");
        g.lines
            .push(format!("      integer {decl}, status(MPI_STATUS_SIZE)"));
    } else {
        g.lines.push(format!("      integer {decl}"));
    }

    for _ in 0..g.rng.gen_range(0..=3) {
        g.assignment();
    }

    let mut has_rank = false;
    if uses_mpi {
        g.lines.push("      call MPI_Init(ierr)".to_string());
        if g.rng.gen_bool(0.5) {
            g.lines
                .push("      call MPI_Comm_size(MPI_COMM_WORLD, count, ierr)".to_string());
        }
        if g.rng.gen_bool(0.9) {
            g.lines
                .push("      call MPI_Comm_rank(MPI_COMM_WORLD, myid, ierr)".to_string());
            has_rank = true;
        }
        if g.rng.gen_bool(0.2) {
            g.send(); // a send in global context
        }
        if has_rank {
            for _ in 0..g.rng.gen_range(0..=3) {
                if g.blocks + 8 > 28 {
                    break;
                }
                g.rank_section();
            }
        }
    } else if g.rng.gen_bool(0.5) && g.blocks + 4 <= 28 {
        g.ordinary_if();
    }

    for _ in 0..g.rng.gen_range(0..=2) {
        g.assignment();
    }

    if g.rng.gen_bool(0.3) {
        let v = g.var();
        g.lines.push(format!("      WRITE(*,9) {v}"));
        g.lines.push("9     format ('value: ', I3)".to_string());
    }

    if uses_mpi {
        g.lines.push("      call MPI_Finalize(ierr)".to_string());
        g.blocks += 2;
    }
    g.lines.push("      END".to_string());

    let mut src = g.lines.join("\n");
    src.push('\n');
    src
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfg::{build, MatchOptions};
    use crate::frontend::parse;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn generated_programs_parse_and_stay_small() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let src = random_program(&mut rng);
            let p = parse(&src).unwrap_or_else(|e| panic!("invalid program: {e}\n{src}"));
            let cfg = build(&p, &MatchOptions::default()).unwrap();
            assert!(cfg.blocks.len() <= 30, "too many blocks:\n{src}");
        }
    }
}
