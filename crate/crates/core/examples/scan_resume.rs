//! Scan a range into JSON lines, stop partway, resume, and compare with an uninterrupted run.

use hyperlattice::hunt::{self, ScanConfig};

fn main() -> hyperlattice::Result<()> {
    let dir = std::env::temp_dir().join(format!("hyperlattice-scan-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let mut whole = ScanConfig::new(2, 20_000, dir.join("whole.jsonl"));
    whole.workers = 4;
    let o = hunt::scan_range(&whole)?;
    println!("uninterrupted: {} records in {} subranges", o.records_written, o.chunk_count);

    let mut cfg = ScanConfig::new(2, 20_000, dir.join("parts.jsonl"));
    cfg.workers = 2;
    cfg.checkpoint = Some(dir.join("parts.ckpt"));
    cfg.stop_after = Some(2);
    let o = hunt::scan_range(&cfg)?;
    println!("stopped after {} of {} subranges", o.chunks_done, o.chunk_count);
    cfg.stop_after = None;
    cfg.resume = true;
    hunt::scan_range(&cfg)?;
    let same = std::fs::read(&whole.output)? == std::fs::read(&cfg.output)?;
    println!("resumed output identical: {same}");
    let text = std::fs::read_to_string(&cfg.output)?;
    for line in text.lines().filter(|l| l.contains("\"in_N\":true")).take(3) {
        println!("{line}");
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
