use std::io::Write;

use qftorus::limitset::image_file_name;
use qftorus::{build_group, limit_points, rasterize, FNCoords, RenderConfig, Viewport};

use super::{check_tau, output};
use crate::cli::{ImageFormat, LimitsetArgs};
use crate::error::CliResult;

pub fn run(args: &LimitsetArgs) -> CliResult {
    check_tau(args.tau)?;
    let coords = FNCoords::new(args.lambda, args.tau)?;
    let g = build_group(&coords)?;
    let [xmin, xmax, ymin, ymax] = args.viewport;
    let viewport = Viewport::new(xmin, xmax, ymin, ymax)?;
    let (w, h) = args.px;
    let cfg = RenderConfig::new(args.maxlen, args.eps, viewport, w, h)?;
    let raster = rasterize(&limit_points(&g, &cfg)?, &cfg);

    let path = match &args.out {
        Some(p) => p.clone(),
        None => args
            .out_dir
            .join(image_file_name(&coords, args.format.extension())),
    };
    let mut out = output(&Some(path.clone()))?;
    match args.format {
        ImageFormat::Ppm => raster.write_ppm(&mut out)?,
        ImageFormat::Svg => raster.write_svg(&mut out)?,
    }
    out.flush()?;
    println!("{}", path.display());
    Ok(())
}
