//! The CLI set syntax: comma-separated members and inclusive ranges,
//! e.g. `1-5,8` for {1,2,3,4,5,8}.

use cycletype::IndexSet;

pub fn parse_set(n: usize, spec: &str) -> Result<IndexSet, String> {
    let mut members: Vec<usize> = Vec::new();
    for piece in spec.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            return Err(format!("empty element in set spec '{spec}'"));
        }
        match piece.split_once('-') {
            Some((a, b)) => {
                let lo: usize = a
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad range start '{a}' in set spec '{spec}'"))?;
                let hi: usize = b
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad range end '{b}' in set spec '{spec}'"))?;
                if lo > hi {
                    return Err(format!("descending range '{piece}' in set spec '{spec}'"));
                }
                members.extend(lo..=hi);
            }
            None => {
                let v: usize = piece
                    .parse()
                    .map_err(|_| format!("bad member '{piece}' in set spec '{spec}'"))?;
                members.push(v);
            }
        }
    }
    IndexSet::new(n, members).map_err(|e| e.to_string())
}

/// Comma list of nonnegative integers, e.g. counts or multiplicity vectors.
pub fn parse_usize_list(spec: &str) -> Result<Vec<usize>, String> {
    spec.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad integer '{}' in list '{spec}'", p.trim()))
        })
        .collect()
}

/// Comma list of floats for w-grids.
pub fn parse_f64_list(spec: &str) -> Result<Vec<f64>, String> {
    spec.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number '{}' in list '{spec}'", p.trim()))
        })
        .collect()
}
