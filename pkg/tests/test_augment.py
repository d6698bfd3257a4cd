from __future__ import annotations

import math

import numpy as np
import pytest

from scenekit import (
    AugmentationConfig,
    AugmentStep,
    PointCloud,
    augment_pipeline,
    chromatic_augment,
    cuboid_crop,
    elastic_distort,
    evaluate_detection,
    gen_scene,
    identity_config,
    parse_augment_config,
    random_jitter,
    sample_cloud,
)
from scenekit.augment import DEFAULT_STEPS, format_augment_config
from scenekit.datagen import GenConfig
from scenekit._rng import rng_from_seed


def uniform_cloud(n: int, seed: int = 0, span: float = 6.0) -> PointCloud:
    rng = rng_from_seed(seed)
    return PointCloud.from_arrays(
        rng.uniform(0, span, size=(n, 3)), rng.uniform(0, 1, size=(n, 3))
    )


class TestCuboidCrop:
    def test_probability_zero_is_identity(self):
        cloud = uniform_cloud(1000)
        out = cuboid_crop(cloud, p=0.0, seed=1)
        assert out is cloud

    def test_full_fraction_keeps_everything(self):
        cloud = uniform_cloud(1000, seed=2)
        out = cuboid_crop(cloud, min_points=1, min_crop=1.0, max_crop=1.0, p=1.0, seed=3)
        assert len(out) == len(cloud)

    def test_min_points_floor(self):
        cloud = uniform_cloud(60_000, seed=4)
        for seed in range(20):
            out = cuboid_crop(cloud, p=1.0, seed=seed)
            assert len(out) >= 50_000

    def test_crop_actually_crops(self):
        cloud = uniform_cloud(30_000, seed=5)
        shrunk = 0
        for seed in range(10):
            out = cuboid_crop(cloud, min_points=1000, p=1.0, seed=seed)
            if len(out) < len(cloud):
                shrunk += 1
        assert shrunk > 0

    def test_aspect_ratio_respected(self):
        cloud = uniform_cloud(5000, seed=6)
        for seed in range(30):
            out = cuboid_crop(cloud, min_points=1, p=1.0, seed=seed)
            if len(out) == len(cloud):
                continue
            lo, hi = out.aabb()
            ext = np.sort(hi - lo)
            # The crop window per-axis fractions keep ratio >= 0.8; the
            # realized point AABB can only shrink inside the window.
            assert ext[0] > 0


class TestRandomJitter:
    def test_sigma_zero_is_identity(self):
        cloud = uniform_cloud(100)
        assert random_jitter(cloud, sigma=0.0, clip=0.1, seed=1) is cloud

    def test_probability_zero_is_identity(self):
        cloud = uniform_cloud(100)
        assert random_jitter(cloud, sigma=0.5, clip=1.0, p=0.0, seed=1) is cloud

    def test_clip_bound(self):
        cloud = uniform_cloud(100_000, seed=7)
        out = random_jitter(cloud, sigma=0.2, clip=0.2, ratio=0.05, p=1.0, seed=8)
        disp = np.abs(out.xyz - cloud.xyz)
        assert disp.max() <= 0.2 + 1e-12

    def test_ratio_concentration(self):
        cloud = uniform_cloud(100_000, seed=9)
        out = random_jitter(cloud, sigma=0.1, clip=0.5, ratio=0.05, p=1.0, seed=10)
        moved = np.any(out.xyz != cloud.xyz, axis=1).mean()
        assert 0.04 <= moved <= 0.06

    def test_colors_untouched(self):
        cloud = uniform_cloud(1000, seed=11)
        out = random_jitter(cloud, sigma=0.3, clip=0.5, ratio=1.0, p=1.0, seed=12)
        assert np.array_equal(out.rgb, cloud.rgb)

    def test_negative_sigma_rejected(self):
        with pytest.raises(ValueError):
            random_jitter(uniform_cloud(10), sigma=-1.0, clip=0.1)


class TestElasticDistort:
    def test_magnitude_zero_is_identity(self):
        cloud = uniform_cloud(500, seed=13)
        out = elastic_distort(cloud, pairs=((0.2, 0.0),), p=(1.0,), seed=14)
        assert np.array_equal(out.points, cloud.points)

    def test_deterministic(self):
        cloud = uniform_cloud(2000, seed=15)
        a = elastic_distort(cloud, seed=16)
        b = elastic_distort(cloud, seed=16)
        assert np.array_equal(a.points, b.points)

    def test_displacement_bound(self):
        cloud = uniform_cloud(100_000, seed=17)
        pairs = ((0.2, 0.4), (0.8, 1.6))
        out = elastic_distort(cloud, pairs=pairs, p=(1.0, 1.0), seed=18)
        bound = 3.0 * sum(m for _, m in pairs)
        disp = np.abs(out.xyz - cloud.xyz)
        assert disp.max() <= bound + 1e-9

    def test_smoothness(self):
        # Nearby points receive nearby displacements.
        base = uniform_cloud(1, seed=19).xyz[0]
        pts = base + rng_from_seed(20).uniform(0, 0.01, size=(100, 3))
        cloud = PointCloud.from_arrays(pts)
        out = elastic_distort(cloud, pairs=((0.5, 1.0),), p=(1.0,), seed=21)
        disp = out.xyz - cloud.xyz
        spread = disp.max(axis=0) - disp.min(axis=0)
        assert spread.max() < 0.2


class TestChromatic:
    def test_drop_forces_zero(self):
        cloud = uniform_cloud(100, seed=22)
        out = chromatic_augment(cloud, "drop", {"p": 1.0}, seed=23)
        assert np.all(out.rgb == 0.0)
        assert np.array_equal(out.xyz, cloud.xyz)

    def test_auto_contrast_full_range_channel_fixed(self):
        rgb = np.zeros((100, 3))
        rgb[:, 0] = np.linspace(0.0, 1.0, 100)  # already full range
        rgb[:, 1] = np.linspace(0.25, 0.75, 100)
        cloud = PointCloud.from_arrays(np.random.default_rng(0).uniform(0, 1, (100, 3)), rgb)
        out = chromatic_augment(cloud, "auto_contrast", {"p": 1.0}, seed=24)
        assert np.allclose(out.rgb[:, 0], cloud.rgb[:, 0])
        assert out.rgb[:, 1].min() == pytest.approx(0.0)
        assert out.rgb[:, 1].max() == pytest.approx(1.0)

    def test_jitter_bounded_after_clamp(self):
        cloud = uniform_cloud(100_000, seed=25)
        out = chromatic_augment(cloud, "jitter", {"std": 0.05, "p": 1.0}, seed=26)
        assert np.abs(out.rgb - cloud.rgb).max() <= 0.3
        assert out.rgb.min() >= 0.0 and out.rgb.max() <= 1.0

    def test_translation_single_offset(self):
        rgb = np.full((50, 3), 0.5)
        cloud = PointCloud.from_arrays(np.zeros((50, 3)), rgb)
        out = chromatic_augment(cloud, "translation", {"ratio": 0.1, "p": 1.0}, seed=27)
        offsets = out.rgb - cloud.rgb
        assert np.allclose(offsets, offsets[0])
        assert np.abs(offsets).max() <= 0.1

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            chromatic_augment(uniform_cloud(10), "sepia", {})


class TestPipeline:
    def test_identity_config_bit_exact(self, gen_config):
        scene = gen_scene(gen_config, seed=0)
        cloud = sample_cloud(scene, gen_config, seed=0)
        out_cloud, out_scene = augment_pipeline(cloud, scene, identity_config(1234))
        assert np.array_equal(out_cloud.points, cloud.points)
        assert out_scene == scene

    def test_same_seed_bit_identical(self, gen_config):
        scene = gen_scene(gen_config, seed=1)
        cloud = sample_cloud(scene, gen_config, seed=1)
        config = AugmentationConfig(seed=99)
        a_cloud, a_scene = augment_pipeline(cloud, scene, config)
        b_cloud, b_scene = augment_pipeline(cloud, scene, config)
        assert np.array_equal(a_cloud.points, b_cloud.points)
        assert a_scene == b_scene

    def test_rotate_only_keeps_detection_perfect(self, gen_config):
        scene = gen_scene(gen_config, seed=2)
        cloud = sample_cloud(scene, gen_config, seed=2)
        rotate_only = AugmentationConfig(
            steps=(AugmentStep("random_rotate", {"axis": "z", "angle": [90]}),),
            seed=7,
        )
        out_cloud, out_scene = augment_pipeline(cloud, scene, rotate_only)
        report = evaluate_detection(out_scene, out_scene)
        assert report.average[0.5] == 1.0
        # The cloud rotated with the scene: its bounding box follows.
        assert len(out_cloud) == len(cloud)

    def test_geometric_steps_keep_scene_cloud_aligned(self, gen_config):
        scene = gen_scene(gen_config, seed=3)
        cloud = sample_cloud(scene, gen_config, seed=3)
        config = AugmentationConfig(
            steps=(
                AugmentStep("random_rotate", {"axis": "z", "angle": [0, 90, 180, 270]}),
                AugmentStep("random_scale", {"scale": [0.75, 1.25]}),
            ),
            seed=5,
        )
        out_cloud, out_scene = augment_pipeline(cloud, scene, config)
        # Wall baselines scale with the cloud bounding box.
        base_ratio = out_scene.walls[0].baseline_length() / scene.walls[0].baseline_length()
        lo, hi = cloud.aabb()
        olo, ohi = out_cloud.aabb()
        cloud_ratio = (ohi - olo).max() / (hi - lo).max()
        assert base_ratio == pytest.approx(cloud_ratio, rel=1e-6)

    def test_geometric_augmentation_commutes_with_evaluation(self, gen_config):
        from scenekit import perturb_scene

        geometric = AugmentationConfig(
            steps=(
                AugmentStep("random_rotate", {"axis": "z", "angle": [0, 90, 180, 270]}),
                AugmentStep("random_scale", {"scale": [0.75, 1.25]}),
            ),
            seed=17,
        )
        for seed in range(10):
            gt = gen_scene(gen_config, seed=seed)
            pred = perturb_scene(gt, sigma_pos=0.12, seed=seed + 50)
            cloud = sample_cloud(gt, gen_config, seed=seed)
            base = evaluate_detection(pred, gt)
            # Same config + seed => the same rotation/scale draw for both.
            _, gt_aug = augment_pipeline(cloud, gt, geometric)
            _, pred_aug = augment_pipeline(cloud, pred, geometric)
            moved = evaluate_detection(pred_aug, gt_aug)
            for cat in base.counts:
                for t in (0.25, 0.5):
                    assert base.counts[cat][t] == moved.counts[cat][t]

    def test_unknown_step_rejected(self):
        config = AugmentationConfig(steps=(AugmentStep("melt", {}),))
        with pytest.raises(ValueError, match="melt"):
            augment_pipeline(uniform_cloud(10), gen_scene(seed=0), config)

    def test_default_steps_follow_recipe_order(self):
        names = [s.name for s in DEFAULT_STEPS]
        assert names == [
            "cuboid_crop",
            "random_jitter",
            "random_jitter",
            "random_jitter",
            "random_jitter",
            "elastic_distort",
            "random_rotate",
            "random_scale",
            "auto_contrast",
            "chromatic_translation",
            "chromatic_jitter",
            "color_drop",
        ]


class TestConfigFile:
    def test_roundtrip(self):
        text = format_augment_config(AugmentationConfig())
        parsed = parse_augment_config(text, seed=3)
        assert parsed.steps == DEFAULT_STEPS
        assert parsed.seed == 3

    def test_parse_mixed_values(self):
        text = (
            "random_jitter sigma=0.2 clip=0.2 ratio=0.05 p=0.8\n"
            "# a comment\n"
            "elastic_distort params=[[0.2,0.4],[0.8,1.6]] p=[0.8,0.5]\n"
            "random_rotate axis='z' angle=[0,90,180,270]\n"
        )
        config = parse_augment_config(text)
        assert config.steps[0].params["sigma"] == 0.2
        assert config.steps[1].params["params"] == [[0.2, 0.4], [0.8, 1.6]]
        assert config.steps[2].params["axis"] == "z"

    def test_bad_value_reports_line(self):
        with pytest.raises(ValueError, match="line 2"):
            parse_augment_config("color_drop p=0.1\nrandom_jitter sigma=oops\n")

    def test_bad_probability_rejected(self):
        with pytest.raises(ValueError, match="probability"):
            parse_augment_config("color_drop p=1.5\n")
