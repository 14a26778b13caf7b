//! Drives the command line in-process: build the d = 5 join, certify it, and
//! search X-ray lines for the cube, writing artifacts to a temporary folder.
//!
//!     cargo run --release --example cli_pipeline

fn main() -> anyhow::Result<()> {
    let dir = std::env::temp_dir().join("xray-cover-pipeline");
    std::fs::create_dir_all(&dir)?;
    let path = |f: &str| dir.join(f).display().to_string();
    let steps: Vec<Vec<String>> = vec![
        vec![
            "construct".into(),
            "join".into(),
            "--left".into(),
            "polygon-16".into(),
            "--right".into(),
            "s2-8".into(),
            "--out".into(),
            path("d5.json"),
        ],
        vec![
            "certify".into(),
            "constant_width".into(),
            "5".into(),
            "--config".into(),
            path("d5.json"),
            "--out".into(),
            path("d5-cert.json"),
        ],
        vec![
            "polytope".into(),
            "xray-search".into(),
            "cube-3".into(),
            "--out".into(),
            path("cube-lines.json"),
        ],
        vec![
            "polytope".into(),
            "xray-verify".into(),
            "cube-3".into(),
            "--lines".into(),
            path("cube-lines.json"),
        ],
        vec!["thresholds".into(), "3".into(), "6".into()],
    ];
    for args in steps {
        println!("$ xray-cover {}", args.join(" "));
        let argv = std::iter::once("xray-cover".to_string()).chain(args);
        let code = xray_cover::cli::run(argv, &mut std::io::stdout(), &mut std::io::stderr());
        println!("(exit {code})\n");
    }
    Ok(())
}
