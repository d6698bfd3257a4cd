/**
 * Thin bindings over the `scenekit` CLI for Node tooling and training loops.
 *
 * Nothing here reimplements core logic: scenes cross the boundary as script
 * text, every operation shells out to the CLI, and evaluation results are
 * the CLI's JSON verbatim. Core error messages (with their line/column
 * positions) surface unchanged as the `Error` message.
 *
 * The CLI is resolved from the SCENEKIT_CLI environment variable (a
 * whitespace-separated command line, e.g. "python3 -m scenekit") and falls
 * back to `scenekit` on PATH.
 */

import { spawnSync } from 'node:child_process';
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

export type EvalMode = 'layout' | 'detect';

export interface QuantizationOptions {
  /** Bin width in meters (CLI default 0.025). */
  binSize?: number;
  /** Number of bins (CLI default 1280). */
  numBins?: number;
  /** Per-axis origin subtracted before binning (CLI default 0). */
  origin?: number;
}

export interface ThresholdCounts {
  tp: number;
  fp: number;
  fn: number;
  f1: number;
}

export interface CategoryReport {
  /** True when the category is absent from both scenes (F1 = 1 by convention). */
  empty: boolean;
  /** One entry per threshold, keyed by its decimal string (e.g. "0.25"). */
  [threshold: string]: ThresholdCounts | boolean;
}

export interface EvalReport {
  mode: string;
  thresholds: number[];
  categories: Record<string, CategoryReport>;
  average: Record<string, number>;
}

export interface AugmentOptions {
  /** Directory receiving points.ply and scene.txt. */
  outDir: string;
  seed?: number;
  /** Augmentation recipe file; omitted = the built-in default recipe. */
  configPath?: string;
}

export interface AugmentResult {
  pointsPath: string;
  scenePath: string;
  scene: BoundScene;
}

/** Numeric element rows for constructing scenes without script text. */
export interface SceneElements {
  /** [ax, ay, az, bx, by, bz, height, thickness] per wall. */
  walls?: number[][];
  /** [wallId, cx, cy, cz, width, height] per door. */
  doors?: number[][];
  /** [wallId, cx, cy, cz, width, height] per window. */
  windows?: number[][];
  /** Category plus [cx, cy, cz, angleZ, sx, sy, sz] per box. */
  boxes?: { category: string; params: number[] }[];
}

function cliCommand(): string[] {
  const fromEnv = process.env.SCENEKIT_CLI;
  if (fromEnv && fromEnv.trim().length > 0) {
    return fromEnv.trim().split(/\s+/);
  }
  return ['scenekit'];
}

interface CliResult {
  stdout: string;
  stderr: string;
  status: number;
}

function runCli(args: string[]): CliResult {
  const [command, ...prefix] = cliCommand();
  const proc = spawnSync(command, [...prefix, ...args], {
    encoding: 'utf8',
    maxBuffer: 1 << 28,
  });
  if (proc.error) {
    throw proc.error;
  }
  const status = proc.status ?? -1;
  if (status !== 0) {
    throw new Error(proc.stderr.trim());
  }
  return { stdout: proc.stdout, stderr: proc.stderr, status };
}

function withTempDir<T>(fn: (dir: string) => T): T {
  const dir = mkdtempSync(join(tmpdir(), 'scenekit-'));
  try {
    return fn(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

function writeScript(dir: string, name: string, text: string): string {
  const path = join(dir, name);
  writeFileSync(path, text, 'utf8');
  return path;
}

/**
 * Opaque scene handle. Construction validates the script through the core
 * and stores its canonical serialization; the handle is immutable.
 */
export class BoundScene {
  private constructor(private readonly canonical: string) {}

  /** Parse and canonicalize script text (throws on malformed scripts). */
  static fromScript(text: string): BoundScene {
    return withTempDir((dir) => {
      const path = writeScript(dir, 'scene.txt', text);
      const { stdout } = runCli(['validate', path, '--emit-canonical']);
      return new BoundScene(stdout);
    });
  }

  /** Build a scene from flat numeric element rows. */
  static fromElements(elements: SceneElements): BoundScene {
    const lines: string[] = [];
    (elements.walls ?? []).forEach((row, i) => {
      lines.push(`wall_${i}=Wall(${row.join(',')})`);
    });
    (elements.doors ?? []).forEach((row, i) => {
      const [wallId, ...rest] = row;
      lines.push(`door_${i}=Door(wall_${wallId},${rest.join(',')})`);
    });
    (elements.windows ?? []).forEach((row, i) => {
      const [wallId, ...rest] = row;
      lines.push(`window_${i}=Window(wall_${wallId},${rest.join(',')})`);
    });
    (elements.boxes ?? []).forEach((box, i) => {
      lines.push(`bbox_${i}=Bbox(${box.category},${box.params.join(',')})`);
    });
    return BoundScene.fromScript(lines.join('\n') + (lines.length > 0 ? '\n' : ''));
  }

  /** Canonical script text (the core's own serialization). */
  get script(): string {
    return this.canonical;
  }
}

/** Parse script text into an opaque, validated handle. */
export function parseScript(text: string): BoundScene {
  return BoundScene.fromScript(text);
}

/**
 * Serialize a scene: canonical 3-decimal text, or the all-integer quantized
 * form when quantization options are given.
 */
export function serializeScene(scene: BoundScene, spec?: QuantizationOptions): string {
  if (spec === undefined) {
    return scene.script;
  }
  return withTempDir((dir) => {
    const path = writeScript(dir, 'scene.txt', scene.script);
    const args = ['quantize', path];
    if (spec.binSize !== undefined) args.push('--bin-size', String(spec.binSize));
    if (spec.numBins !== undefined) args.push('--num-bins', String(spec.numBins));
    if (spec.origin !== undefined) args.push('--origin', String(spec.origin));
    return runCli(args).stdout;
  });
}

/** Raw CLI evaluation output: byte-identical with `scenekit eval`. */
export function evaluateRaw(
  pred: BoundScene,
  gt: BoundScene,
  mode: EvalMode,
  thresholds?: number[],
): string {
  return withTempDir((dir) => {
    const predPath = writeScript(dir, 'pred.txt', pred.script);
    const gtPath = writeScript(dir, 'gt.txt', gt.script);
    const args = ['eval', predPath, gtPath, '--mode', mode];
    if (thresholds !== undefined) {
      args.push('--thresholds', thresholds.join(','));
    }
    return runCli(args).stdout;
  });
}

/** Hungarian-matched F1 report as a nested mapping (parsed CLI JSON). */
export function evaluate(
  pred: BoundScene,
  gt: BoundScene,
  mode: EvalMode,
  thresholds?: number[],
): EvalReport {
  return JSON.parse(evaluateRaw(pred, gt, mode, thresholds)) as EvalReport;
}

/** Layout metric: walls/doors/windows via planar IoU. */
export function evaluateLayout(
  pred: BoundScene,
  gt: BoundScene,
  thresholds?: number[],
): EvalReport {
  return evaluate(pred, gt, 'layout', thresholds);
}

/** Detection metric: oriented boxes via volume IoU, per category. */
export function evaluateDetection(
  pred: BoundScene,
  gt: BoundScene,
  thresholds?: number[],
): EvalReport {
  return evaluate(pred, gt, 'detect', thresholds);
}

/**
 * Run the augmentation recipe on a point-cloud file and its scene labels.
 * Writes `points.ply` and `scene.txt` into `outDir` and returns the
 * augmented scene as a handle.
 */
export function augmentPipeline(
  plyPath: string,
  scene: BoundScene,
  options: AugmentOptions,
): AugmentResult {
  return withTempDir((dir) => {
    const scenePath = writeScript(dir, 'scene.txt', scene.script);
    const args = ['augment', plyPath, scenePath, '--out', options.outDir];
    if (options.seed !== undefined) args.push('--seed', String(options.seed));
    if (options.configPath !== undefined) args.push('--config', options.configPath);
    runCli(args);
    const outScene = join(options.outDir, 'scene.txt');
    return {
      pointsPath: join(options.outDir, 'points.ply'),
      scenePath: outScene,
      scene: BoundScene.fromScript(readFileSync(outScene, 'utf8')),
    };
  });
}
