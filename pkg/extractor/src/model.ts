/**
 * Local TF.js checkpoint loading and penultimate-feature models.
 *
 * A checkpoint is a directory holding `model.json` plus its weight shards.
 * Layers-format checkpoints get a feature model cut at the penultimate layer
 * (or a named layer); graph-format checkpoints are executed at a named output
 * node. Inference only, CPU backend, no training.
 */

import * as fs from 'fs'
import * as path from 'path'
import * as tf from '@tensorflow/tfjs'

export interface BackboneOptions {
  /** layers models: name of the feature layer; default penultimate layer */
  featureLayer?: string
  /** graph models: output node to fetch; default model output */
  outputNode?: string
  /** square input size; default inferred from the model input shape */
  inputSize?: number
}

export interface Backbone {
  inputSize: number
  /** embedding width; -1 until the first batch for graph models */
  dim: number
  embed(batch: tf.Tensor4D): tf.Tensor2D
  dispose(): void
}

function concatArrayBuffers(buffers: ArrayBuffer[]): ArrayBuffer {
  const total = buffers.reduce((sum, b) => sum + b.byteLength, 0)
  const out = new Uint8Array(total)
  let offset = 0
  for (const buffer of buffers) {
    out.set(new Uint8Array(buffer), offset)
    offset += buffer.byteLength
  }
  return out.buffer
}

function toArrayBuffer(buffer: Buffer): ArrayBuffer {
  const out = new ArrayBuffer(buffer.byteLength)
  new Uint8Array(out).set(buffer)
  return out
}

/** IOHandler reading `model.json` + weight shards from a local directory. */
export function checkpointLoadHandler(dir: string): tf.io.IOHandler {
  return {
    load: async () => {
      const jsonPath = path.join(dir, 'model.json')
      const manifest = JSON.parse(fs.readFileSync(jsonPath, 'utf8'))
      const weightSpecs: tf.io.WeightsManifestEntry[] = []
      const shards: ArrayBuffer[] = []
      for (const group of manifest.weightsManifest ?? []) {
        weightSpecs.push(...group.weights)
        for (const shard of group.paths) {
          shards.push(toArrayBuffer(fs.readFileSync(path.join(dir, shard))))
        }
      }
      return {
        modelTopology: manifest.modelTopology,
        format: manifest.format,
        generatedBy: manifest.generatedBy,
        convertedBy: manifest.convertedBy,
        trainingConfig: manifest.trainingConfig,
        weightSpecs,
        weightData: concatArrayBuffers(shards),
      }
    },
  }
}

/** IOHandler writing `model.json` + a single weight shard to a directory. */
export function checkpointSaveHandler(dir: string): tf.io.IOHandler {
  return {
    save: async (artifacts: tf.io.ModelArtifacts) => {
      fs.mkdirSync(dir, { recursive: true })
      const weightData = Array.isArray(artifacts.weightData)
        ? concatArrayBuffers(artifacts.weightData as ArrayBuffer[])
        : (artifacts.weightData as ArrayBuffer)
      const manifest = {
        modelTopology: artifacts.modelTopology,
        format: artifacts.format,
        generatedBy: artifacts.generatedBy,
        convertedBy: artifacts.convertedBy,
        trainingConfig: artifacts.trainingConfig,
        weightsManifest: [
          { paths: ['weights.bin'], weights: artifacts.weightSpecs },
        ],
      }
      fs.writeFileSync(path.join(dir, 'model.json'), JSON.stringify(manifest))
      fs.writeFileSync(path.join(dir, 'weights.bin'), Buffer.from(new Uint8Array(weightData)))
      return {
        modelArtifactsInfo: {
          dateSaved: new Date(),
          modelTopologyType: 'JSON' as const,
        },
      }
    },
  }
}

function squareInputSize(shape: Array<number | null>, override?: number): number {
  if (override) {
    return override
  }
  // layers/graph image models carry [batch, height, width, channels]
  const height = shape.length >= 3 ? shape[1] : null
  if (!height || height <= 0) {
    throw new Error(
      `cannot infer the input size from model input shape [${shape}]; pass --input-size`,
    )
  }
  return height
}

class LayersBackbone implements Backbone {
  inputSize: number
  dim: number
  private readonly features: tf.LayersModel

  constructor(model: tf.LayersModel, options: BackboneOptions) {
    const layer = options.featureLayer
      ? model.getLayer(options.featureLayer)
      : model.layers[model.layers.length - 2]
    if (!layer) {
      throw new Error('model has no penultimate layer to extract from')
    }
    this.features = tf.model({ inputs: model.inputs, outputs: layer.output })
    this.inputSize = squareInputSize(
      model.inputs[0].shape as Array<number | null>,
      options.inputSize,
    )
    const outShape = this.features.outputs[0].shape
    this.dim = outShape
      .slice(1)
      .reduce((product: number, size) => product * (size ?? 1), 1)
  }

  embed(batch: tf.Tensor4D): tf.Tensor2D {
    return tf.tidy(() => {
      const out = this.features.predict(batch) as tf.Tensor
      return out.reshape([batch.shape[0], -1]) as tf.Tensor2D
    })
  }

  dispose(): void {
    this.features.dispose()
  }
}

class GraphBackbone implements Backbone {
  inputSize: number
  dim = -1
  private readonly model: tf.GraphModel
  private readonly outputNode?: string

  constructor(model: tf.GraphModel, options: BackboneOptions) {
    this.model = model
    this.outputNode = options.outputNode
    this.inputSize = squareInputSize(
      (model.inputs[0].shape ?? []) as Array<number | null>,
      options.inputSize,
    )
  }

  embed(batch: tf.Tensor4D): tf.Tensor2D {
    return tf.tidy(() => {
      const out = (
        this.outputNode
          ? this.model.execute(batch, this.outputNode)
          : this.model.predict(batch)
      ) as tf.Tensor
      const flat = out.reshape([batch.shape[0], -1]) as tf.Tensor2D
      this.dim = flat.shape[1]
      return flat
    })
  }

  dispose(): void {
    this.model.dispose()
  }
}

export async function loadBackbone(
  checkpoint: string,
  options: BackboneOptions = {},
): Promise<Backbone> {
  const jsonPath = path.join(checkpoint, 'model.json')
  if (!fs.existsSync(jsonPath)) {
    throw new Error(`checkpoint not found: ${jsonPath}`)
  }
  const manifest = JSON.parse(fs.readFileSync(jsonPath, 'utf8'))
  const handler = checkpointLoadHandler(checkpoint)
  if (manifest.format === 'graph-model') {
    return new GraphBackbone(await tf.loadGraphModel(handler), options)
  }
  return new LayersBackbone(await tf.loadLayersModel(handler), options)
}
