use crate::config::Format;

/// Rows of pre-formatted cells, rendered as CSV (canonical), Markdown or
/// gnuplot-style blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Markdown cells when they differ from the CSV cells.
    pub md_rows: Option<Vec<Vec<String>>>,
    /// Column whose value starts a new plot block.
    pub group: usize,
}

impl Table {
    pub fn new(headers: Vec<&'static str>, group: usize) -> Self {
        Self {
            headers,
            rows: Vec::new(),
            md_rows: None,
            group,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Md => self.markdown(),
            Format::Plot => self.plot(),
        }
    }

    pub fn csv(&self) -> String {
        let mut out = self.headers.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn markdown(&self) -> String {
        let line = |cells: &[String]| format!("| {} |\n", cells.join(" | "));
        let headers: Vec<String> = self.headers.iter().map(|h| h.to_string()).collect();
        let mut out = line(&headers);
        out.push_str(&format!("|{}\n", "---|".repeat(headers.len())));
        for row in self.md_rows.as_ref().unwrap_or(&self.rows) {
            out.push_str(&line(row));
        }
        out
    }

    /// Whitespace-separated columns, one block per group value, blocks
    /// separated by two blank lines so each is a gnuplot `index`.
    pub fn plot(&self) -> String {
        let mut out = format!("# {}\n", self.headers.join(" "));
        let mut current: Option<&str> = None;
        for row in &self.rows {
            let key = row[self.group].as_str();
            if current != Some(key) {
                if current.is_some() {
                    out.push_str("\n\n");
                }
                out.push_str(&format!("# {key}\n"));
                current = Some(key);
            }
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

pub fn fixed4(x: f64) -> String {
    format!("{x:.4}")
}
