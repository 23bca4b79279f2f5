/**
 * Pure-JS image decoding into normalized float tensors.
 *
 * No augmentation anywhere: decode, bilinear-resize to the backbone's input
 * size, scale to [0, 1]. Re-running on the same file always yields the same
 * tensor, which keeps extraction deterministic end to end.
 */

import * as fs from 'fs'
import * as path from 'path'
import * as tf from '@tensorflow/tfjs'
import * as jpeg from 'jpeg-js'
import { PNG } from 'pngjs'

interface RawImage {
  data: Uint8Array // RGBA
  width: number
  height: number
}

function decodeFile(file: string): RawImage {
  const raw = fs.readFileSync(file)
  const ext = path.extname(file).toLowerCase()
  if (ext === '.png') {
    const png = PNG.sync.read(raw)
    return { data: png.data, width: png.width, height: png.height }
  }
  if (ext === '.jpg' || ext === '.jpeg') {
    const img = jpeg.decode(raw, { useTArray: true, maxMemoryUsageInMB: 512 })
    return { data: img.data, width: img.width, height: img.height }
  }
  throw new Error(`unsupported image type: ${file}`)
}

/** Decode one image file into a [size, size, 3] float32 tensor in [0, 1]. */
export function loadImageTensor(file: string, size: number): tf.Tensor3D {
  const { data, width, height } = decodeFile(file)
  const rgb = new Float32Array(width * height * 3)
  for (let i = 0, j = 0; i < width * height; i++, j += 4) {
    rgb[i * 3] = data[j]
    rgb[i * 3 + 1] = data[j + 1]
    rgb[i * 3 + 2] = data[j + 2]
  }
  return tf.tidy(() => {
    const image = tf.tensor3d(rgb, [height, width, 3])
    const resized =
      height === size && width === size
        ? image
        : tf.image.resizeBilinear(image, [size, size])
    return resized.div(255) as tf.Tensor3D
  })
}
