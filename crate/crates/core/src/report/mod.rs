//! Results persistence, grouped summaries and static reports.

mod csv_io;
mod render;
mod summary;

pub use csv_io::{read_csv, read_csv_from, write_csv, write_csv_to, CSV_HEADER};
pub use render::{render, render_markdown, render_svg, write_report, ReportFormat};
pub use summary::{summarize, GroupField, IntervalKind, ReportSpec, Statistic, Summary, SummaryRow};
