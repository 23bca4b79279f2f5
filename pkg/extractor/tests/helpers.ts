/** Fixture builders: deterministic images and a tiny local checkpoint. */

import * as fs from 'fs'
import * as path from 'path'
import * as tf from '@tensorflow/tfjs'
import * as jpeg from 'jpeg-js'
import { PNG } from 'pngjs'
import { checkpointSaveHandler } from '../src/model'

/** Small deterministic PRNG so fixtures never depend on Math.random. */
export function lcg(seed: number): () => number {
  let state = seed >>> 0
  return () => {
    state = (state * 1664525 + 1013904223) >>> 0
    return state / 0x100000000
  }
}

function writePng(file: string, size: number, rand: () => number): void {
  const png = new PNG({ width: size, height: size })
  for (let i = 0; i < size * size; i++) {
    png.data[i * 4] = Math.floor(256 * rand())
    png.data[i * 4 + 1] = Math.floor(256 * rand())
    png.data[i * 4 + 2] = Math.floor(256 * rand())
    png.data[i * 4 + 3] = 255
  }
  fs.writeFileSync(file, PNG.sync.write(png))
}

function writeJpeg(file: string, size: number, rand: () => number): void {
  const data = Buffer.alloc(size * size * 4)
  for (let i = 0; i < size * size; i++) {
    data[i * 4] = Math.floor(256 * rand())
    data[i * 4 + 1] = Math.floor(256 * rand())
    data[i * 4 + 2] = Math.floor(256 * rand())
    data[i * 4 + 3] = 255
  }
  fs.writeFileSync(file, jpeg.encode({ data, width: size, height: size }, 95).data)
}

/** Class-per-directory image tree: `classes` x `perClass`, PNG + one JPEG each. */
export function makeFixtureDataset(
  root: string,
  classes = 2,
  perClass = 4,
  imageSize = 12,
): void {
  const rand = lcg(1234)
  for (let c = 0; c < classes; c++) {
    const dir = path.join(root, `class_${String.fromCharCode(97 + c)}`)
    fs.mkdirSync(dir, { recursive: true })
    for (let i = 0; i < perClass; i++) {
      if (i === perClass - 1) {
        writeJpeg(path.join(dir, `img_${i}.jpg`), imageSize, rand)
      } else {
        writePng(path.join(dir, `img_${i}.png`), imageSize, rand)
      }
    }
  }
}

/**
 * Image tree whose pixel statistics depend on the class, so embeddings keep
 * class structure: class c draws around a distinct mean color.
 */
export function makeClassedDataset(
  root: string,
  classes: number,
  perClass: number,
  imageSize = 12,
  seed = 7,
): void {
  for (let c = 0; c < classes; c++) {
    const dir = path.join(root, `class_${String(c).padStart(2, '0')}`)
    fs.mkdirSync(dir, { recursive: true })
    const palette = lcg(seed + 31 * c)
    const base = [palette(), palette(), palette()].map((v) => Math.floor(200 * v))
    for (let i = 0; i < perClass; i++) {
      const rand = lcg(seed + 31 * c + 1009 * (i + 1))
      const png = new PNG({ width: imageSize, height: imageSize })
      for (let p = 0; p < imageSize * imageSize; p++) {
        png.data[p * 4] = Math.min(255, base[0] + Math.floor(56 * rand()))
        png.data[p * 4 + 1] = Math.min(255, base[1] + Math.floor(56 * rand()))
        png.data[p * 4 + 2] = Math.min(255, base[2] + Math.floor(56 * rand()))
        png.data[p * 4 + 3] = 255
      }
      fs.writeFileSync(path.join(dir, `img_${String(i).padStart(3, '0')}.png`), PNG.sync.write(png))
    }
  }
}

/**
 * Save a tiny classification checkpoint with deterministic weights.
 * Penultimate layer is the dense feature layer of width `dim`.
 */
export async function makeCheckpoint(
  dir: string,
  inputSize = 8,
  dim = 128,
  classCount = 3,
): Promise<void> {
  const model = tf.sequential({
    layers: [
      tf.layers.conv2d({
        inputShape: [inputSize, inputSize, 3],
        filters: 4,
        kernelSize: 3,
        activation: 'relu',
        name: 'stem',
      }),
      tf.layers.flatten({ name: 'flatten' }),
      tf.layers.dense({ units: dim, activation: 'relu', name: 'features' }),
      tf.layers.dense({ units: classCount, activation: 'softmax', name: 'logits' }),
    ],
  })
  // tf's initializers are not seedable portably; set weights deterministically
  const fresh = model.getWeights().map((weight, index) => {
    const values = new Float32Array(weight.size)
    const gen = lcg(1000 + index)
    for (let i = 0; i < values.length; i++) {
      values[i] = (gen() - 0.5) * 0.4
    }
    return tf.tensor(values, weight.shape as number[])
  })
  model.setWeights(fresh)
  fresh.forEach((tensor) => tensor.dispose())
  await model.save(checkpointSaveHandler(dir))
  model.dispose()
}
