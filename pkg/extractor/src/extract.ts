/**
 * Batch extraction: labeled image directory -> embeddings NPY + labels NPY.
 *
 * Output files follow the hypercone toolkit's interchange format (n x d `<f4`
 * C-order embeddings, n `<i8` labels, row-aligned in dataset scan order) and
 * feed `hypercone build` without any conversion. Extraction runs in inference
 * mode with no augmentation, so identical inputs give identical files.
 */

import * as tf from '@tensorflow/tfjs'
import { scanLabeledImages } from './dataset'
import { loadImageTensor } from './image'
import { loadBackbone } from './model'
import { writeEmbeddingsNpy, writeLabelsNpy } from './npy'

export interface ExtractionSpec {
  /** directory holding model.json + weight shards */
  checkpoint: string
  /** directory with one subdirectory per class (optionally under a split) */
  datasetDir: string
  split?: string
  batchSize?: number
  embeddingsOut: string
  labelsOut: string
  featureLayer?: string
  outputNode?: string
  inputSize?: number
}

export interface ExtractionSummary {
  count: number
  dim: number
  classes: string[]
}

export async function extract(spec: ExtractionSpec): Promise<ExtractionSummary> {
  const { entries, classes } = scanLabeledImages(spec.datasetDir, spec.split ?? '')
  const backbone = await loadBackbone(spec.checkpoint, {
    featureLayer: spec.featureLayer,
    outputNode: spec.outputNode,
    inputSize: spec.inputSize,
  })
  const batchSize = spec.batchSize ?? 32
  if (batchSize < 1) {
    throw new Error(`batch size must be >= 1, got ${batchSize}`)
  }

  try {
    let embeddings: Float32Array | null = null
    let dim = -1
    for (let start = 0; start < entries.length; start += batchSize) {
      const slice = entries.slice(start, start + batchSize)
      const batch = tf.tidy(() =>
        tf.stack(slice.map((entry) => loadImageTensor(entry.file, backbone.inputSize))),
      ) as tf.Tensor4D
      const features = backbone.embed(batch)
      const values = (await features.data()) as Float32Array
      if (embeddings === null) {
        dim = features.shape[1]
        embeddings = new Float32Array(entries.length * dim)
      } else if (features.shape[1] !== dim) {
        throw new Error(
          `backbone emitted width ${features.shape[1]} after ${dim}; shape mismatch`,
        )
      }
      embeddings.set(values, start * dim)
      batch.dispose()
      features.dispose()
    }
    if (embeddings === null || dim < 2) {
      throw new Error(`backbone produced ${dim}-wide features; need dim >= 2`)
    }
    writeEmbeddingsNpy(spec.embeddingsOut, embeddings, entries.length, dim)
    writeLabelsNpy(
      spec.labelsOut,
      entries.map((entry) => entry.label),
    )
    return { count: entries.length, dim, classes }
  } finally {
    backbone.dispose()
  }
}
