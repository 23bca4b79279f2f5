import * as assert from 'node:assert/strict'
import { test } from 'node:test'
import * as fs from 'fs'
import * as os from 'os'
import * as path from 'path'
import { scanLabeledImages } from '../src/dataset'
import { makeFixtureDataset } from './helpers'

function tmpdir(): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), 'dataset-test-'))
}

test('classes sort lexicographically and files sort within each class', () => {
  const root = tmpdir()
  makeFixtureDataset(root, 3, 4)
  const { entries, classes } = scanLabeledImages(root)
  assert.deepEqual(classes, ['class_a', 'class_b', 'class_c'])
  assert.equal(entries.length, 12)
  assert.deepEqual(
    entries.map((e) => e.label),
    [0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2],
  )
  const files = entries.map((e) => path.basename(e.file))
  assert.deepEqual(files.slice(0, 4), ['img_0.png', 'img_1.png', 'img_2.png', 'img_3.jpg'])
})

test('split subdirectory is honored', () => {
  const root = tmpdir()
  makeFixtureDataset(path.join(root, 'train'), 2, 2)
  const { entries } = scanLabeledImages(root, 'train')
  assert.equal(entries.length, 4)
})

test('missing directory and empty trees are rejected', () => {
  const root = tmpdir()
  assert.throws(() => scanLabeledImages(path.join(root, 'nope')), /not found/)
  fs.mkdirSync(path.join(root, 'empty'))
  assert.throws(() => scanLabeledImages(path.join(root, 'empty')), /no class/)
  fs.mkdirSync(path.join(root, 'empty', 'class_a'))
  assert.throws(() => scanLabeledImages(path.join(root, 'empty')), /no images/)
})

test('non-image files are ignored', () => {
  const root = tmpdir()
  makeFixtureDataset(root, 1, 2)
  fs.writeFileSync(path.join(root, 'class_a', 'notes.txt'), 'ignore me')
  const { entries } = scanLabeledImages(root)
  assert.equal(entries.length, 2)
})
