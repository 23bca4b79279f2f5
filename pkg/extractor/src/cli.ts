#!/usr/bin/env node
/**
 * Command-line front end for embedding extraction.
 *
 * Exit codes: 0 success, 2 usage error, 1 extraction failure (missing
 * checkpoint, unreadable dataset, shape mismatch), each with a message.
 */

import { extract, ExtractionSpec } from './extract'

const USAGE = `usage: hypercone-extract --checkpoint DIR --dataset DIR \\
    --embeddings-out FILE.npy --labels-out FILE.npy \\
    [--split NAME] [--batch-size N] [--feature-layer NAME] \\
    [--output-node NAME] [--input-size N]`

function parseArgs(argv: string[]): ExtractionSpec {
  const values = new Map<string, string>()
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i]
    const value = argv[i + 1]
    if (!flag.startsWith('--') || value === undefined) {
      throw new UsageError(`malformed arguments near ${flag}`)
    }
    values.set(flag.slice(2), value)
  }
  const required = ['checkpoint', 'dataset', 'embeddings-out', 'labels-out']
  for (const name of required) {
    if (!values.has(name)) {
      throw new UsageError(`missing required flag --${name}`)
    }
  }
  const intFlag = (name: string): number | undefined => {
    if (!values.has(name)) {
      return undefined
    }
    const parsed = parseInt(values.get(name)!, 10)
    if (!Number.isInteger(parsed) || parsed < 1) {
      throw new UsageError(`--${name} must be a positive integer`)
    }
    return parsed
  }
  return {
    checkpoint: values.get('checkpoint')!,
    datasetDir: values.get('dataset')!,
    split: values.get('split'),
    batchSize: intFlag('batch-size'),
    embeddingsOut: values.get('embeddings-out')!,
    labelsOut: values.get('labels-out')!,
    featureLayer: values.get('feature-layer'),
    outputNode: values.get('output-node'),
    inputSize: intFlag('input-size'),
  }
}

class UsageError extends Error {}

export async function main(argv: string[]): Promise<number> {
  let spec: ExtractionSpec
  try {
    spec = parseArgs(argv)
  } catch (err) {
    console.error(`error: ${(err as Error).message}`)
    console.error(USAGE)
    return 2
  }
  try {
    const summary = await extract(spec)
    console.log(`count=${summary.count}`)
    console.log(`dim=${summary.dim}`)
    console.log(`classes=${summary.classes.length}`)
    console.log(`embeddings=${spec.embeddingsOut}`)
    console.log(`labels=${spec.labelsOut}`)
    return 0
  } catch (err) {
    console.error(`error: ${(err as Error).message}`)
    return 1
  }
}

if (require.main === module) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code
  })
}
