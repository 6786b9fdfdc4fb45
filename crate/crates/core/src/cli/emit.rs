//! Plain-text matrix files for computer-algebra systems.

use crate::hhl::LineBundleComplex;
use crate::polyring::PolyMatrix;

fn rows_text(m: &PolyMatrix, names: &[String]) -> Vec<String> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c).to_text(names)).collect::<Vec<_>>().join(", "))
        .collect()
}

/// One line per differential: `prefix_d1 = [[a, b], [c, d]]`.
pub fn matrices_text(prefix: &str, c: &LineBundleComplex) -> String {
    let mut out = String::new();
    for i in 1..=c.length() {
        let rows = rows_text(c.d(i), &c.variables);
        let body = rows.iter().map(|r| format!("[{r}]")).collect::<Vec<_>>().join(", ");
        out.push_str(&format!("{prefix}_d{i} = [{body}]\n"));
    }
    out
}

/// A Macaulay2 script defining the ring, each named complex's
/// differentials `{prefix}d{i}`, and checks that consecutive products
/// vanish.
pub fn m2_text(complexes: &[(&str, &LineBundleComplex)]) -> String {
    let Some((_, first)) = complexes.first() else { return String::new() };
    let mut out = format!("R = QQ[{}];\n", first.variables.join(","));
    for (prefix, c) in complexes {
        for i in 1..=c.length() {
            let d = c.d(i);
            let name = format!("{prefix}d{i}");
            if d.rows() == 0 || d.cols() == 0 {
                out.push_str(&format!("{name} = map(R^{}, R^{}, 0);\n", d.rows(), d.cols()));
                continue;
            }
            let body = rows_text(d, &c.variables).iter().map(|r| format!("{{{r}}}")).collect::<Vec<_>>().join(", ");
            out.push_str(&format!("{name} = matrix{{{body}}};\n"));
        }
        for i in 1..c.length() {
            out.push_str(&format!("assert({prefix}d{i} * {prefix}d{} == 0);\n", i + 1));
        }
    }
    out
}
