use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;

use pillowvol::cache::DiskCache;
use pillowvol::genfun::{Pipeline, PipelineConfig};
use pillowvol::oracle::count_pillow_covers;
use pillowvol::partitions::characters::{centralizer_order, character_value};
use pillowvol::partitions::{partitions_of, Partition};
use pillowvol::table::{load_table, verify_table, Status};
use pillowvol::volume::PoleConvention;
use pillowvol::{Exec, ProfilePair};

fn table_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/appendix_b.csv")
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn character_table_s4() {
    // rows 4, 31, 22, 211, 1111; columns 1^4, 21^2, 2^2, 31, 4
    let rows: [(&[u32], [i128; 5]); 5] = [
        (&[4], [1, 1, 1, 1, 1]),
        (&[3, 1], [3, 1, -1, 0, -1]),
        (&[2, 2], [2, 0, 2, -1, 0]),
        (&[2, 1, 1], [3, -1, -1, 0, 1]),
        (&[1, 1, 1, 1], [1, -1, 1, 1, -1]),
    ];
    let cols: [&[u32]; 5] = [&[1, 1, 1, 1], &[2, 1, 1], &[2, 2], &[3, 1], &[4]];
    for (lam, want) in rows {
        let l = Partition::new(lam.to_vec());
        for (rho, w) in cols.iter().zip(want) {
            assert_eq!(character_value(&l, rho).unwrap(), w, "χ^{lam:?}({rho:?})");
        }
    }
}

#[test]
fn column_orthogonality() {
    for n in 1..=9 {
        let lams = partitions_of(n);
        let rhos = partitions_of(n);
        for (i, a) in rhos.iter().enumerate() {
            for b in &rhos[i..] {
                let s: i128 = lams
                    .iter()
                    .map(|l| character_value(l, a.parts()).unwrap() * character_value(l, b.parts()).unwrap())
                    .sum();
                let want = if a == b { centralizer_order(a.parts()) } else { BigInt::from(0) };
                assert_eq!(BigInt::from(s), want, "n = {n}, {a:?} vs {b:?}");
            }
        }
    }
}

#[test]
fn shipped_table_round_trips() {
    let text = std::fs::read_to_string(table_path()).unwrap();
    let rows = load_table(&table_path()).unwrap();
    let lines: Vec<&str> = text.lines().skip(1).filter(|l| !l.trim().is_empty()).collect();
    assert_eq!(rows.len(), lines.len());
    for (r, l) in rows.iter().zip(lines) {
        assert_eq!(r.to_csv_line(), l, "line {}", r.line);
    }
}

#[test]
fn frozen_cover_counts() {
    // brute-force enumeration over permutation tuples, frozen
    let p = ProfilePair::new(vec![2], vec![1, 1]).unwrap();
    let want = [(2, q(1, 2), q(1, 2)), (4, q(13, 4), q(3, 1)), (6, q(127, 16), q(6, 1))];
    for (deg, all, conn) in want {
        let c = count_pillow_covers(&p, deg, Exec::Sequential).unwrap();
        assert_eq!((c.all, c.connected), (all, conn), "degree {deg}");
    }
}

#[test]
fn verify_is_deterministic_across_exec_modes() {
    let rows = load_table(&table_path()).unwrap();
    let run = |exec| {
        let pipe = Pipeline::new(PipelineConfig { exec, cap: 4, ..Default::default() });
        verify_table(&rows, 4, &pipe, PoleConvention::IncludePoles)
    };
    let (s, p) = (run(Exec::Sequential), run(Exec::Parallel));
    assert_eq!(s, p);
    assert!(s.ok(), "{s}");
    assert!(s.count(Status::Pass) == 6);
}

#[test]
fn disk_cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let prof = ProfilePair::new(vec![2], vec![1, 1]).unwrap();
    let cold = Pipeline::new(PipelineConfig { cache: Some(DiskCache::new(dir.path())), ..Default::default() });
    let a = cold.zprime_series(&prof, 6).unwrap();
    let cache = DiskCache::new(dir.path());
    assert!(!cache.is_empty());
    let warm = Pipeline::new(PipelineConfig { cache: Some(cache), ..Default::default() });
    assert_eq!(warm.zprime_series(&prof, 6).unwrap(), a);
    let bare = Pipeline::new(PipelineConfig::default());
    assert_eq!(bare.zprime_series(&prof, 6).unwrap(), a);
}
