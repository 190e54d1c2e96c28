//! Values computed once with 30-digit arbitrary-precision arithmetic
//! (mpmath `gamma`, `besselk`) and frozen here.

pub const GAMMA_3_7: f64 = 4.170_651_783_796_603_165_393_6;

/// (ν, r, K_ν(r))
pub const BESSEL_K: [(f64, f64, f64); 13] = [
    (0.0, 1.0, 0.421_024_438_240_708_333_335_627_379_213),
    (1.0, 1.0, 0.601_907_230_197_234_574_737_540_001_536),
    (1.0, 0.5, 1.656_441_120_003_300_893_696_445_403_17),
    (0.0, 0.5, 0.924_419_071_227_665_861_781_924_167_53),
    (0.0, 0.01, 4.721_244_730_161_094_944_324_630_374_98),
    (2.0, 0.1, 199.503_964_642_114_117_105_400_106_202),
    (0.3, 2.5, 0.063_313_879_296_295_559_524_452_262_274_8),
    (0.0, 20.0, 5.741_237_815_336_524_292_716_702_061_62e-10),
    (1.0, 20.0, 5.883_057_969_557_038_177_650_282_171_54e-10),
    (2.0, 1e-4, 199_999_999.499_999_993_426_645_461_19),
    (0.0, 1e-6, 13.931_442_073_626_419_458_688_962_846),
    (1.0, 1e-6, 999_999.999_992_784_324_215_075_882_301),
    (2.5, 1e-4, 37_599_424_056.799_296_322_543_186_955_9),
];

/// (N, r, h_N(r) = K_{N/2}(r)/K_{N/2−1}(r))
pub const H_N: [(u32, f64, f64); 24] = [
    (2, 1e-6, 71_780.078_092_983_783_427_702_696_531_4),
    (2, 1e-4, 1_072.239_754_693_886_316_805_816_76),
    (2, 0.05, 6.393_120_792_292_587_637_634_322_685_57),
    (2, 0.5, 1.791_872_508_432_220_233_652_974_695_13),
    (2, 1.0, 1.429_625_398_260_401_758_028_108_023_45),
    (2, 2.0, 1.228_036_929_818_907_975_742_672_452_08),
    (2, 5.0, 1.095_775_045_641_330_905_009_406_292_14),
    (2, 20.0, 1.024_702_017_018_293_651_040_446_040_37),
    (4, 1e-6, 2_000_000.000_013_931_532_577_503_292_46),
    (4, 1e-4, 20_000.000_932_627_236_207_836_884_206_8),
    (4, 0.05, 40.156_418_130_125_988_677_431_429_527_4),
    (4, 0.5, 4.558_075_418_476_585_339_870_658_171_35),
    (4, 1.0, 2.699_483_935_593_772_343_892_677_399_77),
    (4, 2.0, 1.814_307_758_763_789_489_948_794_373_47),
    (4, 5.0, 1.312_596_069_766_056_715_289_503_205_71),
    (4, 20.0, 1.075_893_463_067_270_751_291_977_727_17),
    (5, 1e-6, 3_000_000.000_001_000_134_755_665_522_29),
    (5, 1e-4, 30_000.000_099_989_999_562_247_934_074_4),
    (5, 0.05, 60.047_619_047_619_044_290_896_057_699_6),
    (5, 0.5, 6.333_333_333_333_333_333_333_333_333_33),
    (5, 1.0, 3.5),
    (5, 2.0, 2.166_666_666_666_666_666_666_666_666_67),
    (5, 5.0, 1.433_333_333_333_333_333_333_333_333_33),
    (5, 20.0, 1.102_380_952_380_952_380_952_380_952_38),
];
