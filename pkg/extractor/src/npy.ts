/**
 * Minimal NPY (version 1.0) writer/reader.
 *
 * Matches the interchange contract of the hypercone toolkit exactly:
 * little-endian `<f4` 2-D embedding matrices and `<i8` 1-D label vectors,
 * C-order, 64-byte-aligned version-1.0 header. Writes go through a temp file
 * and an atomic rename so no partial file is ever visible.
 */

import * as fs from 'fs'
import * as path from 'path'

const MAGIC = Buffer.from('\x93NUMPY', 'latin1')

function npyHeader(descr: string, shape: number[]): Buffer {
  const shapeRepr =
    shape.length === 1 ? `(${shape[0]},)` : `(${shape.join(', ')})`
  const text = `{'descr': '${descr}', 'fortran_order': False, 'shape': ${shapeRepr}, }`
  const body = Buffer.from(text, 'latin1')
  const pad = (64 - ((10 + body.length + 1) % 64)) % 64
  const full = Buffer.concat([body, Buffer.alloc(pad, 0x20), Buffer.from('\n')])
  const header = Buffer.alloc(10)
  MAGIC.copy(header, 0)
  header[6] = 1 // major version
  header[7] = 0 // minor version
  header.writeUInt16LE(full.length, 8)
  return Buffer.concat([header, full])
}

function atomicWrite(target: string, payload: Buffer): void {
  const dir = path.dirname(path.resolve(target))
  const tmp = path.join(dir, `.tmp-${process.pid}-${Date.now()}~`)
  fs.writeFileSync(tmp, payload)
  fs.renameSync(tmp, target)
}

/** Write an n x d float32 matrix as a `<f4` C-order NPY file. */
export function writeEmbeddingsNpy(
  target: string,
  data: Float32Array,
  rows: number,
  cols: number,
): void {
  if (data.length !== rows * cols) {
    throw new Error(
      `embedding buffer holds ${data.length} values, expected ${rows}x${cols}`,
    )
  }
  const payload = Buffer.from(data.buffer, data.byteOffset, data.byteLength)
  atomicWrite(target, Buffer.concat([npyHeader('<f4', [rows, cols]), payload]))
}

/** Write an integer label vector as a 1-D `<i8` NPY file. */
export function writeLabelsNpy(target: string, labels: number[]): void {
  const data = new BigInt64Array(labels.length)
  labels.forEach((value, i) => {
    if (!Number.isInteger(value) || value < 0) {
      throw new Error(`label at row ${i} is not a non-negative integer: ${value}`)
    }
    data[i] = BigInt(value)
  })
  const payload = Buffer.from(data.buffer, data.byteOffset, data.byteLength)
  atomicWrite(target, Buffer.concat([npyHeader('<i8', [labels.length]), payload]))
}

export interface ParsedNpy {
  descr: string
  shape: number[]
  /** raw little-endian payload bytes, C-order */
  payload: Buffer
}

/** Parse just enough NPY to verify round trips in tests. */
export function readNpy(target: string): ParsedNpy {
  const raw = fs.readFileSync(target)
  if (raw.length < 10 || !raw.subarray(0, 6).equals(MAGIC)) {
    throw new Error(`${target}: not an NPY file`)
  }
  if (raw[6] !== 1 || raw[7] !== 0) {
    throw new Error(`${target}: NPY version ${raw[6]}.${raw[7]} unsupported`)
  }
  const headerLen = raw.readUInt16LE(8)
  const headerText = raw.subarray(10, 10 + headerLen).toString('latin1')
  const descr = /'descr':\s*'([^']+)'/.exec(headerText)?.[1]
  const shapeText = /'shape':\s*\(([^)]*)\)/.exec(headerText)?.[1]
  if (!descr || shapeText === undefined) {
    throw new Error(`${target}: unparseable NPY header: ${headerText}`)
  }
  const shape = shapeText
    .split(',')
    .map((part) => part.trim())
    .filter((part) => part.length > 0)
    .map((part) => parseInt(part, 10))
  return { descr, shape, payload: raw.subarray(10 + headerLen) }
}
