/**
 * Labeled image dataset layout: one subdirectory per class.
 *
 *     datasetDir/<split>/<className>/<image>.{png,jpg,jpeg}
 *
 * Classes are sorted lexicographically and numbered 0..C-1; files are sorted
 * within each class, so the scan order (and therefore the row order of the
 * emitted embedding/label files) is deterministic.
 */

import * as fs from 'fs'
import * as path from 'path'

const IMAGE_EXTENSIONS = new Set(['.png', '.jpg', '.jpeg'])

export interface DatasetEntry {
  file: string
  label: number
  className: string
}

export interface ScannedDataset {
  entries: DatasetEntry[]
  classes: string[]
}

export function scanLabeledImages(datasetDir: string, split = ''): ScannedDataset {
  const root = split ? path.join(datasetDir, split) : datasetDir
  if (!fs.existsSync(root) || !fs.statSync(root).isDirectory()) {
    throw new Error(`dataset directory not found: ${root}`)
  }
  const classes = fs
    .readdirSync(root)
    .filter((name) => fs.statSync(path.join(root, name)).isDirectory())
    .sort()
  if (classes.length === 0) {
    throw new Error(`no class subdirectories under ${root}`)
  }
  const entries: DatasetEntry[] = []
  classes.forEach((className, label) => {
    const classDir = path.join(root, className)
    const files = fs
      .readdirSync(classDir)
      .filter((name) => IMAGE_EXTENSIONS.has(path.extname(name).toLowerCase()))
      .sort()
    for (const file of files) {
      entries.push({ file: path.join(classDir, file), label, className })
    }
  })
  if (entries.length === 0) {
    throw new Error(`no images (.png/.jpg/.jpeg) under ${root}`)
  }
  return { entries, classes }
}
