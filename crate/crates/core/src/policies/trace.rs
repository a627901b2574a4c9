use std::io::Write;

use super::TraceEvent;

/// Writes `time,class,decision,prob,remaining_0,…,remaining_{m-1}`.
pub fn write_trace_csv(
    events: &[TraceEvent],
    num_resources: usize,
    w: impl Write,
) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec![
        "time".to_string(),
        "class".into(),
        "decision".into(),
        "prob".into(),
    ];
    header.extend((0..num_resources).map(|l| format!("remaining_{l}")));
    out.write_record(&header)?;
    for e in events {
        let mut rec = vec![
            e.time.to_string(),
            e.class.to_string(),
            e.decision.as_str().to_string(),
            e.prob.to_string(),
        ];
        rec.extend(e.remaining.iter().map(f64::to_string));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}
