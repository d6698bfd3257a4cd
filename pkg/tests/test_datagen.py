from __future__ import annotations

import numpy as np
import pytest

from scenekit import (
    GenConfig,
    Scene,
    evaluate_layout,
    gen_scene,
    load_ply,
    parse_script,
    perturb_scene,
    sample_cloud,
    validate_scene,
    write_corpus,
)
from scenekit.datagen import DEFAULT_CATEGORIES


class TestGenScene:
    def test_deterministic(self, gen_config):
        assert gen_scene(gen_config, seed=42) == gen_scene(gen_config, seed=42)

    def test_different_seeds_differ(self, gen_config):
        assert gen_scene(gen_config, seed=1) != gen_scene(gen_config, seed=2)

    def test_every_scene_valid(self, gen_config):
        for seed in range(200):
            assert validate_scene(gen_scene(gen_config, seed=seed)) == []

    def test_self_layout_evaluation(self, gen_config):
        scene = gen_scene(gen_config, seed=5)
        report = evaluate_layout(scene, scene)
        assert report.average[0.25] == 1.0
        assert report.average[0.5] == 1.0

    def test_rooms_are_closed_loops(self):
        scene = gen_scene(GenConfig(), seed=3)
        assert len(scene.walls) == 4
        starts = [w.a for w in scene.walls]
        ends = [w.b for w in scene.walls]
        assert set(starts) == set(ends)

    def test_multiple_rooms(self):
        scene = gen_scene(GenConfig(rooms=(2, 2)), seed=4)
        assert len(scene.walls) == 8

    def test_category_coverage_in_corpus(self, gen_config):
        seen = set()
        for seed in range(100):
            seen |= {b.category for b in gen_scene(gen_config, seed=seed).boxes}
        assert len(seen) >= 5

    def test_all_element_kinds_exercised(self, gen_config):
        kinds = set()
        for seed in range(100):
            scene = gen_scene(gen_config, seed=seed)
            kinds |= {o.kind for o in scene.openings}
            if scene.walls:
                kinds.add("wall")
            if scene.boxes:
                kinds.add("bbox")
        assert kinds == {"wall", "door", "window", "bbox"}

    def test_infeasible_opening_config(self):
        config = GenConfig(room_width=(0.5, 0.6), room_depth=(0.5, 0.6),
                           openings_per_wall=(1, 1), boxes_per_room=(0, 0))
        with pytest.raises(ValueError, match="infeasible"):
            gen_scene(config, seed=0)


class TestSampleCloud:
    def test_empty_scene_empty_cloud(self, gen_config):
        assert len(sample_cloud(Scene(), gen_config, seed=0)) == 0

    def test_density_on_single_wall(self):
        # One 4 x 2.6 m wall at 100 pts/m^2: Poisson(1040).
        scene = parse_script("wall_0=Wall(0,0,0,4,0,0,2.6,0.1)")
        config = GenConfig(density=100.0, noise_sigma=0.0)
        cloud = sample_cloud(scene, config, seed=0)
        assert 1000 <= len(cloud) <= 1080
        assert np.allclose(cloud.xyz[:, 1], 0.0)

    def test_points_near_surfaces_with_noise(self, gen_config):
        scene = parse_script("wall_0=Wall(0,0,0,4,0,0,2.6,0.1)")
        sigma = 0.02
        config = GenConfig(density=200.0, noise_sigma=sigma)
        cloud = sample_cloud(scene, config, seed=9)
        # The wall plane is y = 0; all samples stay within 6 sigma.
        assert np.abs(cloud.xyz[:, 1]).max() <= 6 * sigma

    def test_deterministic(self, gen_config):
        scene = gen_scene(gen_config, seed=31)
        a = sample_cloud(scene, gen_config, seed=31)
        b = sample_cloud(scene, gen_config, seed=31)
        assert np.array_equal(a.points, b.points)

    def test_box_faces_sampled(self):
        scene = Scene()
        text = "bbox_0=Bbox(sofa,0,0,0.5,0,1,1,1)"
        scene = parse_script(text)
        config = GenConfig(density=300.0)
        cloud = sample_cloud(scene, config, seed=2)
        lo, hi = cloud.aabb()
        assert lo == pytest.approx([-0.5, -0.5, 0.0], abs=1e-6)
        assert hi == pytest.approx([0.5, 0.5, 1.0], abs=1e-6)


class TestPerturbScene:
    def test_zero_perturbation_is_identity(self, gen_config):
        scene = gen_scene(gen_config, seed=8)
        assert perturb_scene(scene, 0.0, 0.0, 0.0, seed=1) == scene

    def test_full_drop_empties_scene(self, gen_config):
        scene = gen_scene(gen_config, seed=9)
        assert perturb_scene(scene, drop_rate=1.0, seed=2) == Scene()

    def test_output_valid(self, gen_config):
        for seed in range(50):
            scene = gen_scene(gen_config, seed=seed)
            out = perturb_scene(scene, 0.2, 0.2, 0.3, seed=seed)
            assert validate_scene(out) == []

    def test_openings_follow_walls(self, gen_config):
        scene = gen_scene(GenConfig(openings_per_wall=(1, 1)), seed=12)
        out = perturb_scene(scene, sigma_pos=0.5, seed=3)
        assert validate_scene(out) == []
        assert len(out.openings) == len(scene.openings)

    def test_dropping_wall_drops_its_openings(self):
        scene = gen_scene(GenConfig(openings_per_wall=(1, 2)), seed=13)
        for seed in range(40):
            out = perturb_scene(scene, drop_rate=0.5, seed=seed)
            assert validate_scene(out) == []
            if len(out.walls) < len(scene.walls) and len(out.openings) < len(scene.openings):
                return
        pytest.fail("drops never removed a wall with openings")

    def test_degradation_orders_f1(self, gen_config):
        from scenekit import evaluate_detection

        def mean_f1(sigma: float) -> float:
            scores = []
            for seed in range(30):
                gt = gen_scene(gen_config, seed=seed)
                pred = perturb_scene(gt, sigma_pos=sigma, seed=seed + 1000)
                scores.append(evaluate_detection(pred, gt).average[0.5])
            return float(np.mean(scores))

        low, high = mean_f1(0.05), mean_f1(0.5)
        assert low < 1.0
        assert high < low


class TestWriteCorpus:
    def test_layout_on_disk(self, tmp_path, gen_config):
        dirs = write_corpus(tmp_path, 3, gen_config, seed=77)
        assert len(dirs) == 3
        for d in dirs:
            scene = parse_script((d / "scene.txt").read_text())
            cloud = load_ply((d / "points.ply").read_bytes())
            assert validate_scene(scene) == []
            assert len(cloud) > 0
